"""Command-line interface: extract, optimize, metrics, augment, render, serve."""

import csv
import io
import json
import sys

import click

from .config import Config, load_config
from .optimize import OptimizationProblem, l2_rot6d, optimize, sos_accuracy
from .parts import PARTS
from .pipeline import extract_sos, load_motion_file, saliency_payload
from .quantize import symbol_table_json
from .skeleton import serialize_motion_json
from .sos import parse_sos_json, sample_percentile_masks, serialize_sos_json, synthesize_sos
from .staff_svg import render_staff_svg
from .features import extract_orientation_features
from .saliency import saliency_all_parts


def _theta_range(ctx, param, value):
    if value is not None and not (0.0 <= value <= 1.0):
        raise click.BadParameter("threshold must be in [0, 1]")
    return value


def _parts_list(ctx, param, value):
    if not value:
        return None
    parts = [p.strip() for p in value.split(",")]
    bad = [p for p in parts if p not in PARTS]
    if bad:
        raise click.BadParameter(f"unknown parts {bad}; valid: {', '.join(PARTS)}")
    return parts


def _fail(msg):
    raise click.ClickException(msg)


@click.group()
def main():
    """Salient orientation symbol toolkit."""


@main.command()
@click.argument("motion_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", "-t", type=float, default=0.9, callback=_theta_range, show_default=True)
@click.option("--parts", callback=_parts_list, default=None, help="Comma-separated part filter, e.g. LA,RA.")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output SOS JSON path.")
@click.option("--svg", type=click.Path(dir_okay=False), default=None, help="Also render the staff SVG here.")
@click.option("--saliency", "saliency_out", type=click.Path(dir_okay=False), default=None, help="Dump per-part saliency JSON here.")
@click.option("--include-first-frame", is_flag=True, default=False)
@click.option("--scale", type=float, default=1.0, show_default=True, help="Meters per BVH file unit.")
@click.option("--axis-map", default="x,-z,y", show_default=True)
def extract(motion_file, threshold, parts, out, svg, saliency_out, include_first_frame, scale, axis_map):
    """Extract an SOS script from a motion file (.json or .bvh)."""
    try:
        motion = load_motion_file(motion_file, scale=scale, axis_map=axis_map)
        script, tracks, global_max, _ = extract_sos(
            motion, theta=threshold, parts=parts, include_first_frame=include_first_frame
        )
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(serialize_sos_json(script))
        if svg:
            with open(svg, "w", encoding="utf-8") as fh:
                fh.write(render_staff_svg(script))
        if saliency_out:
            with open(saliency_out, "w", encoding="utf-8") as fh:
                json.dump(saliency_payload(tracks, global_max), fh, sort_keys=True)
        click.echo(f"wrote {len(script.entries)} entries to {out}")
    except Exception as e:  # noqa: BLE001 - CLI boundary
        _fail(str(e))


@main.command(name="optimize")
@click.argument("motion_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("sos_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["direct", "periodic"]), default="direct", show_default=True)
@click.option("--iters", type=int, default=100, show_default=True)
@click.option("--beta", type=float, default=10.0, show_default=True)
@click.option("--step-weight", type=float, default=1.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Output motion JSON path.")
@click.option("--trace", type=click.Path(dir_okay=False), default=None, help="Write the loss trace CSV here.")
def optimize_cmd(motion_file, sos_file, mode, iters, beta, step_weight, out, trace):
    """Optimize a motion until it satisfies an SOS script."""
    try:
        motion = load_motion_file(motion_file)
        with open(sos_file, encoding="utf-8") as fh:
            script = parse_sos_json(fh.read())
        problem = OptimizationProblem(
            motion=motion, script=script, mode=mode, max_iters=iters, beta=beta, step_weight=step_weight
        )
        result = optimize(problem)
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(serialize_motion_json(result.motion))
        if trace:
            with open(trace, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh)
                w.writerow(["iteration", "loss"])
                for i, loss in enumerate(result.loss_trace):
                    w.writerow([i, repr(loss)])
        click.echo(
            json.dumps(
                {
                    "sos_acc": result.sos_acc,
                    "l2_rot6d": result.l2_rot6d,
                    "iterations": result.iterations,
                    "converged": result.converged,
                },
                sort_keys=True,
            )
        )
    except Exception as e:  # noqa: BLE001
        _fail(str(e))


@main.command()
@click.argument("motion_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("ref_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("sos_file", type=click.Path(exists=True, dir_okay=False))
def metrics(motion_file, ref_file, sos_file):
    """Report SOS accuracy and 6D rotation distance as JSON."""
    try:
        motion = load_motion_file(motion_file)
        ref = load_motion_file(ref_file)
        with open(sos_file, encoding="utf-8") as fh:
            script = parse_sos_json(fh.read())
        click.echo(
            json.dumps(
                {"sos_acc": sos_accuracy(motion, script), "l2_rot6d": l2_rot6d(motion, ref)},
                sort_keys=True,
            )
        )
    except Exception as e:  # noqa: BLE001
        _fail(str(e))


@main.command()
@click.argument("motion_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--samples", type=int, default=1, show_default=True)
@click.option("--out-prefix", default="sos_aug", show_default=True, help="Output files <prefix>_<k>.json.")
def augment(motion_file, seed, samples, out_prefix):
    """Sample SOS scripts at random per-part saliency percentiles."""
    try:
        motion = load_motion_file(motion_file)
        o = extract_orientation_features(motion)
        tracks, _ = saliency_all_parts(o)
        for k, mask in enumerate(sample_percentile_masks(tracks, samples, seed)):
            script = synthesize_sos(o, mask, fps=motion.fps)
            path = f"{out_prefix}_{k}.json"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(serialize_sos_json(script))
            click.echo(path)
    except Exception as e:  # noqa: BLE001
        _fail(str(e))


@main.command()
@click.argument("sos_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--pixels-per-frame", type=float, default=6.0, show_default=True)
@click.option("--column-width", type=float, default=40.0, show_default=True)
def render(sos_file, out, pixels_per_frame, column_width):
    """Render an SOS script to an SVG staff."""
    try:
        with open(sos_file, encoding="utf-8") as fh:
            script = parse_sos_json(fh.read())
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(render_staff_svg(script, pixels_per_frame=pixels_per_frame, column_width=column_width))
    except Exception as e:  # noqa: BLE001
        _fail(str(e))


@main.command()
def symbols():
    """Print the canonical symbol id table."""
    click.echo(symbol_table_json())


@main.command()
@click.option("--port", type=int, default=None)
@click.option("--host", default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
def serve(port, host, config_path, data_dir):
    """Run the local HTTP/JSON service."""
    import uvicorn

    from .server import create_app

    try:
        cfg = load_config(config_path, port=port, host=host, data_dir=data_dir)
    except Exception as e:  # noqa: BLE001
        _fail(str(e))
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port, log_level="warning")


if __name__ == "__main__":
    main()
