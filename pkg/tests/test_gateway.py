"""Gateway: the relay verbs as JSON over a WebSocket."""

import asyncio
import json
import threading

import pytest
from websockets.sync.client import connect

from gazebot.relay import KeyValueStore
from gazebot.relay.gateway import Gateway


class GatewayThread:
    def __init__(self, store):
        self.gateway = Gateway(store)
        self.loop = asyncio.new_event_loop()
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._started = threading.Event()

    def _run(self):
        asyncio.set_event_loop(self.loop)
        self.loop.run_until_complete(self.gateway.start())
        self._started.set()
        self.loop.run_forever()
        self.loop.run_until_complete(self.gateway.stop())
        self.loop.close()

    def start(self):
        self._thread.start()
        assert self._started.wait(timeout=10)
        return self

    def stop(self):
        self.loop.call_soon_threadsafe(self.loop.stop)
        self._thread.join(timeout=10)


@pytest.fixture()
def gw():
    store = KeyValueStore()
    handle = GatewayThread(store).start()
    handle.store = store
    yield handle
    handle.stop()


def ws(gw):
    return connect(f"ws://127.0.0.1:{gw.gateway.port}", open_timeout=5)


def rpc(sock, **msg):
    sock.send(json.dumps(msg))
    return json.loads(sock.recv(timeout=5))


class TestGateway:
    def test_set_get_round_trip(self, gw):
        with ws(gw) as sock:
            ack = rpc(sock, op="set", key="Signals", value="Left")
            assert ack == {"op": "ok", "key": "Signals", "seq": 1}
            got = rpc(sock, op="get", key="Signals")
            assert got == {"op": "value", "key": "Signals", "value": "Left", "seq": 1}

    def test_absent(self, gw):
        with ws(gw) as sock:
            assert rpc(sock, op="get", key="none") == {"op": "absent", "key": "none"}

    def test_events_flow_to_subscriber(self, gw):
        with ws(gw) as sub, ws(gw) as pub:
            assert rpc(sub, op="sub", key="k")["op"] == "ok"
            rpc(pub, op="set", key="k", value="v1")
            rpc(pub, op="set", key="k", value="v2")
            e1 = json.loads(sub.recv(timeout=5))
            e2 = json.loads(sub.recv(timeout=5))
            assert e1 == {"op": "event", "key": "k", "value": "v1", "seq": 1}
            assert e2 == {"op": "event", "key": "k", "value": "v2", "seq": 2}

    def test_telemetry_prefix_feed(self, gw):
        with ws(gw) as sub:
            assert rpc(sub, op="sub", key="telemetry/")["op"] == "ok"
            gw.store.set("telemetry/pose", "0.0 0.0 0.0")
            gw.store.set("Signals", "Left")  # not under the prefix
            gw.store.set("telemetry/speed", "64")
            e1 = json.loads(sub.recv(timeout=5))
            e2 = json.loads(sub.recv(timeout=5))
            assert e1["key"] == "telemetry/pose"
            assert e2["key"] == "telemetry/speed"

    def test_malformed_and_unknown(self, gw):
        with ws(gw) as sock:
            sock.send("this is not json")
            assert json.loads(sock.recv(timeout=5))["op"] == "err"
            assert rpc(sock, op="zap", key="k")["op"] == "err"
            assert rpc(sock, op="set", key="k")["op"] == "err"

    def test_same_store_as_tcp_surface(self, gw):
        # gateway writes are visible to direct store readers and vice versa
        with ws(gw) as sock:
            rpc(sock, op="set", key="Override", value="1")
            assert gw.store.get("Override").value == "1"
            gw.store.set("Speed", "77")
            got = rpc(sock, op="get", key="Speed")
            assert got["value"] == "77"
