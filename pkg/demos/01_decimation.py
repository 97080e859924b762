"""Walk one digit down the resolution ladder.

Shows how area decimation degrades a 28x28 digit as the target width
shrinks, how many object pixels survive at each width, and what the
312-px display projection looks like.  Saves a strip chart to
demo_output/decimation.png.
"""

import random
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from acuity.resample import count_object_pixels, downsample_area, upscale_nearest
from acuity.synthetic import render_digit

OUT_DIR = Path(__file__).parent / "demo_output"


def main() -> None:
    rng = random.Random(4)
    digit = render_digit(8, rng)
    widths = [28, 21, 14, 10, 7, 5, 3, 2, 1]

    print("width  object_pixels  fill")
    fig, axes = plt.subplots(1, len(widths), figsize=(2 * len(widths), 2.4))
    for ax, width in zip(axes, widths):
        small = downsample_area(digit, width)
        pixels = count_object_pixels(small)
        print(f"{width:5d}  {pixels:13d}  {pixels / width**2:.2f}")
        # nearest-neighbor projection, as a labeler would see it
        ax.imshow(upscale_nearest(small, 312), cmap="gray", vmin=0, vmax=255)
        ax.set_title(f"{width}x{width}")
        ax.axis("off")

    OUT_DIR.mkdir(exist_ok=True)
    target = OUT_DIR / "decimation.png"
    fig.tight_layout()
    fig.savefig(target, dpi=72)
    print(f"\nwrote {target}")


if __name__ == "__main__":
    main()
