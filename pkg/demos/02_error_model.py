"""Work with the fitted error-vs-width sigmoid.

Evaluates the reported human error curve (alpha = -0.95, center = 6.5)
across widths, inverts it to plan a resolution budget for target error
rates, and sizes a camera for a field of view with the planned
pixels-per-object requirement.
"""

from acuity.analytics import (
    camera_resolution,
    manual_model,
    predict_error,
    required_resolution,
)

MODEL = manual_model(alpha=-0.95, center=6.5)


def main() -> None:
    print("predicted human error rate by image width")
    print("width  error")
    for width in (1, 2, 4, 7, 10, 14, 20, 28):
        print(f"{width:5d}  {predict_error(width, MODEL):.4f}")

    mid = -MODEL.center / MODEL.alpha
    print(f"\n50% error at width {mid:.4f} (the curve's true midpoint)")

    print("\nresolution needed for a target error rate")
    print("target  width     use")
    for target in (0.25, 0.10, 0.05, 0.01, 0.001):
        plan = required_resolution(target, MODEL)
        print(f"{target:6.3f}  {plan.width:7.3f}  {plan.width_px:3d} px")

    # Size a camera: 300 mm field of view, smallest feature 4 mm across,
    # and the feature should span the width that keeps error under 1%.
    feature_px = required_resolution(0.01, MODEL).width_px
    sensor = camera_resolution(fov=300.0, smallest_feature=4.0, nf=feature_px)
    print(
        f"\n300 mm FOV, 4 mm features, {feature_px} px per feature"
        f" -> camera width {sensor:.0f} px"
    )


if __name__ == "__main__":
    main()
