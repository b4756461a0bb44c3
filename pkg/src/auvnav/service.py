"""Live mission service: one WebSocket endpoint streaming mission state
to any number of observer clients and accepting piloting commands.

One mission at a time; every client command goes through a single
ordered queue, so concurrent clients cannot interleave mutations.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import MissionConfig
from .errors import AuvNavError
from .goals import PromptContext, submit
from .logs import LogRecord, LogWriter, read_log
from .orchestrator import MissionControl, run_mission

MESSAGE_SCHEMA_VERSION = 1

SERVER_TYPES = ("state_update", "scan", "belief_delta", "mission_event",
                "chat_response", "clarification", "report", "error")
CLIENT_TYPES = ("command", "clarification_answer", "pause", "resume", "abort")


def record_to_messages(record: LogRecord) -> list[dict]:
    """Translate one mission log record into wire messages (no seq yet).

    The same translation serves live missions and log replay, so a
    replayed log produces the exact message type sequence of the live run.
    """
    base = {"step_index": record.step_index, "timestamp": record.timestamp}
    if record.kind == "state":
        return [{"type": "state_update", "payload": dict(base, **record.payload)}]
    if record.kind == "scan":
        return [
            {"type": "scan",
             "payload": dict(base, beams=record.payload["beams"])},
            {"type": "belief_delta",
             "payload": dict(base, cells=record.payload["belief_delta"])},
        ]
    if record.kind == "chat":
        return [{"type": "chat_response", "payload": dict(base, **record.payload)}]
    if record.kind == "report":
        return [{"type": "report", "payload": dict(base, **record.payload)}]
    # task, motion_plan, predicate_state, replan_event
    return [{"type": "mission_event",
             "payload": dict(base, kind=record.kind, **record.payload)}]


class _Client:
    """One connected websocket: an outbound queue plus its seq counter."""

    def __init__(self, loop: asyncio.AbstractEventLoop):
        self.loop = loop
        self.outbound: asyncio.Queue = asyncio.Queue()

    def push(self, message: dict) -> None:
        # Called from the mission/dispatcher threads.
        self.loop.call_soon_threadsafe(self.outbound.put_nowait, message)

    def push_local(self, message: dict) -> None:
        # Called from the event loop itself.
        self.outbound.put_nowait(message)


class MissionService:
    """Mission lifecycle + client fan-out behind the websocket endpoint."""

    def __init__(self, config: MissionConfig, replay_log: str | None = None):
        self.config = config
        self.replay_log = replay_log
        self.backend = config.build_backend()
        self.ctx = PromptContext()
        self.clients: list[_Client] = []
        self.clients_lock = threading.Lock()
        self.commands: queue.Queue = queue.Queue()
        self.mission_thread: threading.Thread | None = None
        self.control: MissionControl | None = None
        self._dispatcher: threading.Thread | None = None

    # --- lifecycle ---

    def start(self) -> None:
        self._dispatcher = threading.Thread(target=self._dispatch_loop,
                                            daemon=True)
        self._dispatcher.start()

    def stop(self) -> None:
        if self.control is not None:
            self.control.abort.set()
        if self.mission_thread is not None:
            self.mission_thread.join(timeout=10.0)
        self.commands.put(None)
        if self._dispatcher is not None:
            self._dispatcher.join(timeout=5.0)

    # --- fan-out ---

    def attach(self, client: _Client) -> None:
        with self.clients_lock:
            self.clients.append(client)

    def detach(self, client: _Client) -> None:
        with self.clients_lock:
            if client in self.clients:
                self.clients.remove(client)

    def broadcast(self, message: dict) -> None:
        with self.clients_lock:
            targets = list(self.clients)
        for client in targets:
            client.push(message)

    # --- command handling (dispatcher thread) ---

    def submit_client_message(self, kind: str, payload: dict,
                              client: _Client) -> None:
        self.commands.put((kind, payload, client))

    def _dispatch_loop(self) -> None:
        while True:
            item = self.commands.get()
            if item is None:
                return
            kind, payload, client = item
            try:
                self._handle(kind, payload, client)
            except AuvNavError as exc:
                client.push({"type": "error",
                             "payload": {"message": str(exc)}})

    def _handle(self, kind: str, payload: dict, client: _Client) -> None:
        if kind in ("command", "clarification_answer"):
            self._handle_command(str(payload.get("text", "")), client)
        elif kind == "pause":
            if self.control is not None:
                self.control.pause.set()
                self.broadcast({"type": "mission_event",
                                "payload": {"kind": "control", "event": "paused"}})
        elif kind == "resume":
            if self.control is not None:
                self.control.pause.clear()
                self.broadcast({"type": "mission_event",
                                "payload": {"kind": "control", "event": "resumed"}})
        elif kind == "abort":
            if self.control is not None:
                self.control.abort.set()
                self.control.pause.clear()
                self.broadcast({"type": "mission_event",
                                "payload": {"kind": "control", "event": "aborted"}})
        else:
            client.push({"type": "error",
                         "payload": {"message": f"unknown message type {kind!r}"}})

    def _handle_command(self, text: str, client: _Client) -> None:
        reply = submit(self.backend, self.ctx, text)
        if reply.kind == "clarification":
            client.push({"type": "clarification",
                         "payload": {"question": reply.clarification}})
            return
        if reply.kind == "malformed":
            client.push({"type": "error",
                         "payload": {"message": "command could not be "
                                                "interpreted as a mission goal"}})
            return
        if self.mission_thread is not None and self.mission_thread.is_alive():
            client.push({"type": "error",
                         "payload": {"message": "a mission is already running"}})
            return
        self.broadcast({"type": "chat_response",
                        "payload": {"role": "assistant",
                                    "text": f"mission accepted: {text}"}})
        self.control = MissionControl()
        self.mission_thread = threading.Thread(
            target=self._run_mission, args=(reply.goal, self.control), daemon=True)
        self.mission_thread.start()

    # --- mission thread ---

    def _run_mission(self, goal, control: MissionControl) -> None:
        writer = (LogWriter(self.config.log_path)
                  if self.config.log_path else None)

        def observer(record: LogRecord) -> None:
            if writer is not None:
                writer.write(record)
            for message in record_to_messages(record):
                self.broadcast(message)

        try:
            world = self.config.build_world()
            run_mission(world, goal, self.config.pipeline,
                        self.config.settings, observer, control)
        finally:
            if writer is not None:
                writer.close()

    # --- replay ---

    def replay_messages(self) -> list[dict]:
        messages = []
        for record in read_log(self.replay_log):
            messages.extend(record_to_messages(record))
        return messages


def create_app(config: MissionConfig, replay_log: str | None = None) -> FastAPI:
    app = FastAPI()
    service = MissionService(config, replay_log=replay_log)
    app.state.service = service

    @app.on_event("startup")
    async def _startup():
        service.start()

    @app.on_event("shutdown")
    async def _shutdown():
        service.stop()

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        client = _Client(asyncio.get_running_loop())
        service.attach(client)
        if service.replay_log is not None:
            for message in service.replay_messages():
                client.push_local(message)

        async def sender():
            seq = 0
            while True:
                message = await client.outbound.get()
                seq += 1
                await websocket.send_text(json.dumps(
                    dict(message, seq=seq,
                         schema_version=MESSAGE_SCHEMA_VERSION),
                    separators=(",", ":"), sort_keys=True))

        send_task = asyncio.create_task(sender())
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    data = json.loads(raw)
                    kind = data["type"]
                    if kind not in CLIENT_TYPES:
                        raise ValueError(f"unknown type {kind!r}")
                    payload = data.get("payload", {})
                    if not isinstance(payload, dict):
                        raise ValueError("payload must be an object")
                except (json.JSONDecodeError, KeyError, TypeError,
                        ValueError) as exc:
                    client.push_local({"type": "error",
                                       "payload": {"message": str(exc)}})
                    continue
                service.submit_client_message(kind, payload, client)
        except WebSocketDisconnect:
            pass
        finally:
            service.detach(client)
            send_task.cancel()

    return app
