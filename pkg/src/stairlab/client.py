"""Synchronous client for the compute service.

By default the service app runs in-process (no sockets): each call spins
the request through an ASGI transport.  Pass a base URL to talk to a
running server instead.  Guard trips surface as GuardError, domain errors
as ValueError — same split the exit codes use.
"""

from __future__ import annotations

import asyncio
from typing import Any, Optional

import httpx

from .errors import GuardError


class ServiceClient:
    def __init__(self, server: Optional[str] = None) -> None:
        self._server = server
        self._app = None
        if server is None:
            from .service import create_app

            self._app = create_app()

    def post(self, path: str, payload: dict) -> Any:
        if self._server is None:
            return asyncio.run(self._inprocess("POST", path, payload))
        with httpx.Client(base_url=self._server, timeout=600.0) as client:
            return _handle(client.post(path, json=payload))

    def get(self, path: str) -> Any:
        if self._server is None:
            return asyncio.run(self._inprocess("GET", path, None))
        with httpx.Client(base_url=self._server, timeout=600.0) as client:
            return _handle(client.get(path))

    async def _inprocess(self, method: str, path: str, payload: Optional[dict]) -> Any:
        transport = httpx.ASGITransport(app=self._app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://stairlab.internal", timeout=600.0
        ) as client:
            if method == "GET":
                return _handle(await client.get(path))
            return _handle(await client.post(path, json=payload))


def _handle(response: httpx.Response) -> Any:
    if response.status_code == 200:
        return response.json()
    try:
        detail = response.json().get("detail")
    except Exception:
        detail = response.text
    if isinstance(detail, dict):
        kind = detail.get("kind")
        message = detail.get("message", str(detail))
    else:
        kind = None
        message = str(detail)
    if response.status_code == 422 and kind == "guard":
        raise GuardError(message)
    if response.status_code in (400, 422):
        raise ValueError(message)
    raise RuntimeError(f"service error {response.status_code}: {message}")
