"""Viewer communication: molecular-viewer socket client and web reload tokens.

The desktop molecular viewer listens on a TCP port (env ``VMDSOCK``,
default 5555) for single-line commands of the form
``vmd_visualize_sbl_plugin <post_analysis_output_dir>``; dispatch is
fire-and-forget, an acknowledgement line is optional.  The web viewer is
refreshed by bumping a cache-busting nonce on the iframe URL instead.
"""

from __future__ import annotations

import os
import socket
import socketserver
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from . import SblgenError

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 5555
DEFAULT_CONNECT_TIMEOUT_MS = 5000
PORT_ENV_VAR = "VMDSOCK"
VISUALIZE_VERB = "vmd_visualize_sbl_plugin"


class ViewerBridgeError(SblgenError):
    pass


class BadPort(ViewerBridgeError):
    pass


class ConnectRefused(ViewerBridgeError):
    pass


class Timeout(ViewerBridgeError):
    pass


class IoFailure(ViewerBridgeError):
    pass


class BindFailure(ViewerBridgeError):
    pass


def resolve_port(
    explicit: Optional[int] = None, env: Optional[Mapping[str, str]] = None
) -> int:
    """Port precedence: explicit value > VMDSOCK env var > 5555."""
    if explicit is not None:
        return _check_port(explicit, "explicit port")
    if env is None:
        env = os.environ
    raw = env.get(PORT_ENV_VAR)
    if raw is not None:
        try:
            value = int(raw, 10)
        except ValueError:
            raise BadPort(f"{PORT_ENV_VAR}={raw!r} is not a decimal port") from None
        return _check_port(value, PORT_ENV_VAR)
    return DEFAULT_PORT


def _check_port(value: int, what: str) -> int:
    if not 1 <= value <= 65535:
        raise BadPort(f"{what} out of range 1-65535: {value}")
    return value


@dataclass(frozen=True)
class SocketConfig:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT
    connect_timeout_ms: int = DEFAULT_CONNECT_TIMEOUT_MS


@dataclass(frozen=True)
class ViewerCommand:
    verb: str
    arg: str

    def __post_init__(self) -> None:
        if not self.verb or any(c.isspace() for c in self.verb):
            raise ValueError(f"verb must be non-empty without whitespace: {self.verb!r}")

    def wire(self) -> bytes:
        """Single ASCII line, no extra framing."""
        return f"{self.verb} {self.arg}\n".encode("ascii")


@dataclass(frozen=True)
class SendReport:
    bytes_sent: int
    ack: Optional[str] = None


def send_visualize(cfg: SocketConfig, out_dir) -> SendReport:
    """Send one visualize command; an absent acknowledgement is success."""
    out_dir = Path(out_dir)
    if not out_dir.exists():
        raise IoFailure(f"output directory does not exist: {out_dir}")
    line = ViewerCommand(VISUALIZE_VERB, str(out_dir)).wire()
    timeout = cfg.connect_timeout_ms / 1000.0
    try:
        sock = socket.create_connection((cfg.host, cfg.port), timeout=timeout)
    except ConnectionRefusedError as exc:
        raise ConnectRefused(f"{cfg.host}:{cfg.port}: {exc}") from exc
    except socket.timeout as exc:
        raise Timeout(f"connect to {cfg.host}:{cfg.port} timed out") from exc
    except OSError as exc:
        raise IoFailure(str(exc)) from exc

    try:
        sock.sendall(line)
        sock.shutdown(socket.SHUT_WR)
        ack = _read_optional_ack(sock, timeout)
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    finally:
        sock.close()
    return SendReport(bytes_sent=len(line), ack=ack)


def _read_optional_ack(sock: socket.socket, timeout: float) -> Optional[str]:
    sock.settimeout(timeout)
    chunks = []
    try:
        while True:
            data = sock.recv(256)
            if not data:
                break
            chunks.append(data)
            if b"\n" in data:
                break
    except socket.timeout:
        return None
    text = b"".join(chunks).decode("utf-8", errors="replace").strip()
    return text or None


@dataclass(frozen=True)
class ReloadDescriptor:
    """Cache-busting viewer URL state; nonces strictly increase per session."""

    base_url: str
    nonce: int = 0

    def url(self) -> str:
        return f"{self.base_url}?v={self.nonce}"


def next_reload(desc: ReloadDescriptor) -> ReloadDescriptor:
    return ReloadDescriptor(desc.base_url, desc.nonce + 1)


# -- mock peer ----------------------------------------------------------------


class _PeerHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        peer: "MockViewerPeer" = self.server.peer  # type: ignore[attr-defined]
        while True:
            raw = self.rfile.readline()
            if not raw:
                break
            line = raw.decode("utf-8", errors="replace").rstrip("\n")
            peer._record(line)
            if peer.reply is not None:
                try:
                    self.wfile.write(peer.reply.encode("utf-8") + b"\n")
                    self.wfile.flush()
                except OSError:
                    break


class _PeerServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class MockViewerPeer:
    """In-process stand-in for the viewer-side socket listener."""

    def __init__(self, port: int = 0, host: str = DEFAULT_HOST,
                 reply: Optional[str] = "ok"):
        self.reply = reply
        self._lock = threading.Lock()
        self._transcript: list[tuple[float, str]] = []
        try:
            self._server = _PeerServer((host, port), _PeerHandler)
        except OSError as exc:
            raise BindFailure(f"cannot bind {host}:{port}: {exc}") from exc
        self._server.peer = self  # type: ignore[attr-defined]
        self._thread = threading.Thread(
            target=self._server.serve_forever, daemon=True
        )
        self._thread.start()

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    def _record(self, line: str) -> None:
        with self._lock:
            self._transcript.append((time.monotonic(), line))

    def transcript(self) -> list[str]:
        with self._lock:
            return [line for _, line in self._transcript]

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockViewerPeer":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def mock_viewer_peer(port: int = 0, reply: Optional[str] = "ok") -> MockViewerPeer:
    return MockViewerPeer(port=port, reply=reply)
