"""Drive the hand-labeling HTTP service end to end without a browser:
start it over a small corpus, list events, fetch a lossless image payload,
paint a crude mask and persist it, then read it back.
"""

import base64
import json
import tempfile
import threading
import urllib.request
from pathlib import Path

import numpy as np

from larseg import SynthConfig, generate_corpus
from larseg.service import make_server

workdir = Path(tempfile.mkdtemp(prefix="larseg_demo_"))
generate_corpus(SynthConfig(seed=5), n_events=3, out_dir=workdir)
for stale in workdir.glob("*.larmsk"):
    stale.unlink()  # start unlabeled, as a labeling session would

server = make_server(workdir, port=0)
threading.Thread(target=server.serve_forever, daemon=True).start()
base = f"http://127.0.0.1:{server.server_address[1]}"
print(f"service on {base}, data in {workdir}")


def get(url):
    with urllib.request.urlopen(url) as resp:
        return json.loads(resp.read())


events = get(f"{base}/api/events")
print("events:", [(e["id"], e["status"]) for e in events])

eid = events[0]["id"]
payload = get(f"{base}/api/events/{eid}/image")
amps = np.frombuffer(base64.b64decode(payload["data_base64"]), dtype="<f4")
amps = amps.reshape(payload["height"], payload["width"])
print(f"{eid}: {amps.shape[1]}x{amps.shape[0]}, amplitudes "
      f"[{payload['amp_min']:.1f}, {payload['amp_max']:.1f}]")

# a lazy labeler: mark the brightest 1% as track, the rest unlabeled
labels = np.full(amps.shape, 255, dtype=np.uint8)
labels[amps > np.quantile(amps, 0.99)] = 1
doc = {
    "width": labels.shape[1],
    "height": labels.shape[0],
    "data_base64": base64.b64encode(labels.tobytes()).decode(),
}
req = urllib.request.Request(
    f"{base}/api/events/{eid}/mask", data=json.dumps(doc).encode(), method="PUT"
)
urllib.request.urlopen(req).read()

back = get(f"{base}/api/events/{eid}/mask")
restored = np.frombuffer(base64.b64decode(back["data_base64"]), np.uint8)
assert np.array_equal(restored.reshape(labels.shape), labels)
print("mask round-trip ok; statuses now:",
      [(e["id"], e["status"]) for e in get(f"{base}/api/events")])

server.shutdown()
server.server_close()
