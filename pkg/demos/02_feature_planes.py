"""Compute the 42 per-pixel features of one event and export every plane as
a PNG gallery (demos/output/planes/). Good for eyeballing what each feature
family responds to: window statistics follow the track band, DoG planes
band-pass it, the tensor eigenvalues light up along the direction of the
intensity change.
"""

from pathlib import Path

from larseg import FEATURE_NAMES, SynthConfig, feature_planes, generate_event, to_png

out = Path(__file__).parent / "output" / "planes"
out.mkdir(parents=True, exist_ok=True)

image, _ = generate_event(SynthConfig(seed=3, noise_sigma=4.0), event_seed=42)
planes = feature_planes(image.pixels)
print(f"{planes.shape[0]} planes of {planes.shape[1]}x{planes.shape[2]}")

for idx, name in enumerate(FEATURE_NAMES):
    slug = name.replace(" ", "_").replace("(", "").replace(")", "").replace(",", "")
    to_png(planes[idx], out / f"{idx:02d}_{slug}.png")
    print(f"  {idx:2d}  {name}")

print(f"\ngallery in {out}")
