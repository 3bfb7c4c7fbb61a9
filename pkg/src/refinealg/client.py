"""Thin HTTP client for the service.

Without a server URL the client mounts the service app in-process over an
ASGI transport, so the CLI works standalone while exercising exactly the
same request path a remote deployment would.
"""

from __future__ import annotations

import asyncio
from typing import Any

import httpx


def post(path: str, payload: dict, server: str | None = None) -> tuple[int, Any]:
    """POST a JSON payload; returns (status code, decoded body)."""
    if server:
        with httpx.Client(base_url=server, timeout=120.0) as client:
            resp = client.post(path, json=payload)
            return resp.status_code, resp.json()

    from .service.app import app

    async def _call():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://refinealg.internal", timeout=120.0
        ) as client:
            resp = await client.post(path, json=payload)
            return resp.status_code, resp.json()

    return asyncio.run(_call())
