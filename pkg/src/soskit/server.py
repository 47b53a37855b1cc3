"""Local HTTP/JSON service exposing the extraction and optimization pipeline."""

import json
import time

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel

from .config import Config
from .optimize import OptimizationProblem, optimize
from .pipeline import extract_sos, load_motion_file, resolve_data_path, saliency_payload
from .quantize import QuantizeError, soft_quantize, symbol_table
from .features import extract_orientation_features
from .skeleton import Motion, MotionError, motion_from_dict, serialize_motion_json
from .sos import SOSError, serialize_sos_json, sos_from_dict
from .staff_svg import render_staff_svg


class ExtractRequest(BaseModel):
    motion: dict
    theta: float | None = None
    percentiles: dict[str, float] | float | None = None
    parts: list[str] | None = None
    include_first_frame: bool = False


class RenderRequest(BaseModel):
    sos: dict
    options: dict = {}


class QuantizeRequest(BaseModel):
    motion: dict
    beta: float | None = None


class OptimizeRequest(BaseModel):
    motion: dict
    sos: dict
    options: dict = {}


def _load_motion(doc: dict, cfg: Config) -> Motion:
    if set(doc.keys()) == {"path"}:
        path = resolve_data_path(cfg.data_dir, doc["path"])
        motion = load_motion_file(path, scale=cfg.bvh_scale, axis_map=cfg.bvh_axis_map)
    else:
        motion = motion_from_dict(doc)
    if motion.num_frames > cfg.max_frames:
        raise _TooLong(motion.num_frames)
    return motion


class _TooLong(Exception):
    def __init__(self, frames):
        self.frames = frames


def create_app(config: Config | None = None) -> FastAPI:
    cfg = config or Config()
    app = FastAPI(title="soskit", docs_url=None, redoc_url=None)

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        errors = [
            {"field": ".".join(str(p) for p in e["loc"]), "message": e["msg"]}
            for e in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"error": "validation", "details": errors})

    @app.exception_handler(_TooLong)
    async def _too_long_handler(request: Request, exc: _TooLong):
        return JSONResponse(
            status_code=413,
            content={"error": f"motion has {exc.frames} frames, limit is {cfg.max_frames}"},
        )

    @app.exception_handler(MotionError)
    async def _motion_handler(request: Request, exc: MotionError):
        status = 422 if "frames but" in str(exc) else 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    for err in (SOSError, QuantizeError, PermissionError, ValueError):

        @app.exception_handler(err)
        async def _domain_handler(request: Request, exc: Exception):
            return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.get("/v1/health")
    def health():
        return {"status": "ok"}

    @app.get("/v1/symbols")
    def symbols():
        return symbol_table()

    @app.post("/v1/extract")
    def extract(req: ExtractRequest):
        t0 = time.perf_counter()
        motion = _load_motion(req.motion, cfg)
        theta = cfg.theta if (req.theta is None and req.percentiles is None) else req.theta
        script, tracks, global_max, dense = extract_sos(
            motion,
            theta=theta,
            percentiles=req.percentiles,
            parts=req.parts,
            include_first_frame=req.include_first_frame,
        )
        return {
            "sos": json.loads(serialize_sos_json(script)),
            "saliency": saliency_payload(tracks, global_max)["parts"],
            "global_max": float(global_max),
            "dense_symbols": dense.tolist(),
            "params": {
                "theta": theta,
                "percentiles": req.percentiles,
                "parts": req.parts,
                "include_first_frame": req.include_first_frame,
            },
            "timing_ms": (time.perf_counter() - t0) * 1000.0,
            "warnings": [],
        }

    @app.post("/v1/render")
    def render(req: RenderRequest):
        script = sos_from_dict(req.sos)
        svg = render_staff_svg(
            script,
            pixels_per_frame=float(req.options.get("pixels_per_frame", 6.0)),
            column_width=float(req.options.get("column_width", 40.0)),
        )
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/v1/quantize")
    def quantize(req: QuantizeRequest):
        t0 = time.perf_counter()
        motion = _load_motion(req.motion, cfg)
        beta = cfg.beta if req.beta is None else req.beta
        o = extract_orientation_features(motion)
        qf = soft_quantize(o, beta=beta)
        return {
            "dense_symbols": qf.hard_ids.tolist(),
            "soft": qf.q.tolist(),
            "params": {"beta": beta},
            "timing_ms": (time.perf_counter() - t0) * 1000.0,
            "warnings": [],
        }

    @app.post("/v1/optimize")
    def run_optimize(req: OptimizeRequest):
        t0 = time.perf_counter()
        motion = _load_motion(req.motion, cfg)
        script = sos_from_dict(req.sos)
        opts = dict(req.options)
        allowed = {"iters", "mode", "beta", "step_weight", "lambda_smooth", "lambda_init", "tolerance", "harmonics", "line_search", "seed"}
        unknown = set(opts) - allowed
        if unknown:
            raise ValueError(f"unknown optimize options: {sorted(unknown)}")
        iters = int(opts.pop("iters", cfg.max_iters))
        iters = min(iters, cfg.optimize_iter_cap)
        problem = OptimizationProblem(
            motion=motion,
            script=script,
            mode=str(opts.pop("mode", cfg.mode)),
            beta=float(opts.pop("beta", cfg.beta)),
            max_iters=iters,
            **opts,
        )
        result = optimize(problem)
        return {
            "motion": json.loads(serialize_motion_json(result.motion)),
            "sos_acc": result.sos_acc,
            "l2_rot6d": result.l2_rot6d,
            "loss_trace": result.loss_trace,
            "converged": result.converged,
            "iterations": result.iterations,
            "params": {"iters": iters, "mode": problem.mode, "beta": problem.beta},
            "timing_ms": (time.perf_counter() - t0) * 1000.0,
            "warnings": [],
        }

    return app
