"""Command-line entry points for serving, aggregation, fitting, and planning.

Exit codes: 0 success, 1 domain error (bad data, impossible request),
2 usage error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analytics, service, session, simulate
from .dataset import load_split, resolve_data_dir
from .errors import AcuityError

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acuity",
        description="Measure and model classification error as a function of object resolution.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the labeling HTTP service")
    serve.add_argument("--dataset-dir", help="directory with the four IDX files (or HICEAA_DATA)")
    serve.add_argument("--log", default="trials.jsonl", help="trial log path (append-only)")
    serve.add_argument("--port", type=int, default=service.DEFAULT_PORT)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--display-px", type=int, default=service.DEFAULT_DISPLAY_PX)
    serve.add_argument("--seed", type=int, default=None, help="base seed for per-session draws")
    serve.add_argument("--static-dir", default=None, help="directory with the browser UI bundle")

    aggregate = sub.add_parser("aggregate", help="aggregate a trial log into an error table")
    aggregate.add_argument("--log", required=True)
    aggregate.add_argument("--by", choices=("resolution", "pixels"), default="resolution")
    aggregate.add_argument("--bin-width", type=int, default=1, help="pixel-count bin width")
    aggregate.add_argument("--out", default=None, help="write CSV here instead of stdout")

    fit = sub.add_parser("fit", help="fit the sigmoid error model to a trial log")
    fit.add_argument("--log", required=True)
    fit.add_argument("--by", choices=("resolution", "pixels"), default="resolution")
    fit.add_argument("--pixels-x", choices=("sqrt", "raw"), default="sqrt",
                     help="x variable when fitting by pixels")
    fit.add_argument("--loss", choices=("wls", "binomial"), default="wls")

    predict = sub.add_parser("predict", help="predicted error rate at an image width")
    predict.add_argument("--alpha", type=float, required=True)
    predict.add_argument("--center", type=float, required=True)
    predict.add_argument("--width", type=float, required=True)

    plan = sub.add_parser("plan", help="width required to reach a target error rate")
    plan.add_argument("--alpha", type=float, required=True)
    plan.add_argument("--center", type=float, required=True)
    plan.add_argument("--target-error", type=float, required=True)

    camera = sub.add_parser("camera", help="required camera resolution for a field of view")
    camera.add_argument("--fov", type=float, required=True, help="field-of-view length")
    camera.add_argument("--feature-size", type=float, required=True,
                        help="smallest feature length, same unit as --fov")
    camera.add_argument("--nf", type=float, required=True, help="pixels per smallest feature")

    sim = sub.add_parser("simulate", help="append oracle-labeler trials to a log")
    sim.add_argument("--dataset-dir", help="directory with the four IDX files (or HICEAA_DATA)")
    sim.add_argument("--log", required=True)
    sim.add_argument("--trials", type=int, default=500)
    sim.add_argument("--alpha", type=float, default=-0.95)
    sim.add_argument("--center", type=float, default=6.5)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--session", default="oracle")

    export = sub.add_parser("export", help="write both tables and the fitted model as files")
    export.add_argument("--log", required=True)
    export.add_argument("--out-dir", required=True)
    export.add_argument("--bin-width", type=int, default=1)
    export.add_argument("--loss", choices=("wls", "binomial"), default="wls")

    return parser


def _load_validation(dataset_dir):
    return load_split(resolve_data_dir(dataset_dir), "t10k")


def _cmd_serve(args) -> int:
    split = _load_validation(args.dataset_dir)
    runner = session.TrialRunner(split, args.log, seed=args.seed)
    app = service.LabelService(runner, display_px=args.display_px, static_dir=args.static_dir)
    httpd = service.create_server(app, port=args.port, host=args.host)
    print(f"serving {len(split)} validation examples on http://{args.host}:{args.port}")
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
    return 0


def _cmd_aggregate(args) -> int:
    records = session.load_log(args.log)
    if args.by == "resolution":
        rows = analytics.aggregate_by_resolution(records)
    else:
        rows = analytics.aggregate_by_pixels(records, bin_width=args.bin_width)
    csv = analytics.table_to_csv(rows)
    if args.out:
        Path(args.out).write_text(csv, encoding="utf-8")
    else:
        sys.stdout.write(csv)
    return 0


def _cmd_fit(args) -> int:
    records = session.load_log(args.log)
    if args.by == "resolution":
        rows = analytics.aggregate_by_resolution(records)
        x_values = None
    else:
        rows = analytics.aggregate_by_pixels(records)
        keys = np.array([row.key for row in rows], dtype=np.float64)
        x_values = np.sqrt(keys) if args.pixels_x == "sqrt" else keys
        print(f"# secondary mode: x = {'sqrt(object_pixels)' if args.pixels_x == 'sqrt' else 'object_pixels'}")
    model = analytics.fit_sigmoid(rows, loss=args.loss, x_values=x_values)
    sys.stdout.write(analytics.model_to_csv(model))
    return 0


def _cmd_predict(args) -> int:
    model = analytics.manual_model(args.alpha, args.center)
    print(f"{analytics.predict_error(args.width, model):.6g}")
    return 0


def _cmd_plan(args) -> int:
    model = analytics.manual_model(args.alpha, args.center)
    result = analytics.required_resolution(args.target_error, model)
    print(f"{result.width:.6g} {result.width_px}")
    return 0


def _cmd_camera(args) -> int:
    pixels = analytics.camera_resolution(args.fov, args.feature_size, args.nf)
    print(f"{pixels:.6g}")
    return 0


def _cmd_simulate(args) -> int:
    split = _load_validation(args.dataset_dir)
    model = analytics.manual_model(args.alpha, args.center)
    records = simulate.simulate_trials(
        split, args.trials, model, args.log, seed=args.seed, session_id=args.session
    )
    errors = sum(1 for r in records if not r.correct)
    print(f"appended {len(records)} trials ({errors} errors) to {args.log}")
    return 0


def _cmd_export(args) -> int:
    records = session.load_log(args.log)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_resolution = analytics.aggregate_by_resolution(records)
    by_pixels = analytics.aggregate_by_pixels(records, bin_width=args.bin_width)
    (out_dir / "by_resolution.csv").write_text(analytics.table_to_csv(by_resolution), encoding="utf-8")
    (out_dir / "by_pixels.csv").write_text(analytics.table_to_csv(by_pixels), encoding="utf-8")
    try:
        model = analytics.fit_sigmoid(by_resolution, loss=args.loss)
    except AcuityError as exc:
        print(f"model not written: {exc}", file=sys.stderr)
    else:
        (out_dir / "model.csv").write_text(analytics.model_to_csv(model), encoding="utf-8")
    print(f"wrote tables for {len(records)} records to {out_dir}")
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "aggregate": _cmd_aggregate,
    "fit": _cmd_fit,
    "predict": _cmd_predict,
    "plan": _cmd_plan,
    "camera": _cmd_camera,
    "simulate": _cmd_simulate,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (AcuityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
