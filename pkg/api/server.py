from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
import uvicorn
import logging

from config.settings import Config
from waveguide.closed_form import amplitudes_full, collective_params
from waveguide.conditions import classify_condition
from waveguide.errors import ScatteringError
from waveguide.model import TwoAtomParams
from waveguide.presets import PRESETS, figure_preset
from waveguide.sweep import run_sweep, summarize

logger = logging.getLogger(__name__)

app = FastAPI(title="giant-atom waveguide scattering")

MAX_PRESET_POINTS = 401


class PointRequest(BaseModel):
    theta: float
    phi: float
    gamma: float = Config.GAMMA
    j: float = 0.0
    kappa: float = 0.0
    detuning: float = Field(0.0, alias="delta")

    model_config = {"populate_by_name": True}


@app.exception_handler(ScatteringError)
async def scattering_error_handler(request: Request, exc: ScatteringError):
    logger.warning(f"{request.url.path}: {exc}")
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/api/status")
async def get_status():
    return {
        "status": "active",
        "engines": ["closed_form", "real_space"],
        "config": {
            "gamma": Config.GAMMA,
            "group_velocity": Config.GROUP_VELOCITY,
            "carrier": Config.CARRIER,
            "grid_points": Config.GRID_POINTS,
            "pole_guard": Config.POLE_GUARD,
        },
        "presets": PRESETS,
    }


@app.post("/api/point")
async def evaluate_point(body: PointRequest):
    p = TwoAtomParams(theta=body.theta, phi=body.phi, gamma=body.gamma,
                      j=body.j, kappa=body.kappa, detuning=body.detuning)
    amplitudes = amplitudes_full(p)
    conditions = classify_condition(p)
    return {
        "amplitudes": amplitudes.to_dict(),
        "probabilities": amplitudes.probabilities().to_dict(),
        "collective": collective_params(p).to_dict(),
        "conditions": {**conditions.to_dict(), "reason": conditions.describe()},
    }


@app.get("/api/presets/{name}")
async def get_preset(name: str, points: int = Query(51, ge=2, le=MAX_PRESET_POINTS)):
    spec = figure_preset(name, points=points)
    frame = run_sweep(spec)
    # NaN no es JSON válido
    rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
    return {
        "name": name,
        "caption": spec.caption,
        "summary": summarize(frame),
        "rows": rows,
    }


if __name__ == "__main__":
    # normalmente se arranca con `python main.py serve`
    uvicorn.run(app, host=Config.API_HOST, port=Config.API_PORT)
