"""HTTP front end: a thin FastAPI wrapper over the command layer.

Domain errors (invalid parameters, resonances, empty brackets) map to 422
responses carrying {"kind": "domain"}; unexpected numerical failures map
to 500 with {"kind": "internal"}.
"""

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DomainError, TrisepError
from .. import commands
from .models import (BoundaryRequest, ClassifyRequest, ClassifyResponse,
                     CsvResponse, EvolveRequest, FigureRequest, SuiteModel,
                     VerifyRequest, VerifyResponse, json_safe)
from ..sweeps import Axis

app = FastAPI(title="trisep", version=__version__,
              description="Separability phase diagrams of three-mode Gaussian "
                          "states under amplification, damping and thermal noise.")


@app.exception_handler(DomainError)
async def _domain_error(request: Request, exc: DomainError):
    return JSONResponse(status_code=422,
                        content={"detail": {"kind": "domain", "message": str(exc)}})


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=422,
                        content={"detail": {"kind": "domain", "message": str(exc)}})


@app.exception_handler(TrisepError)
async def _internal_error(request: Request, exc: TrisepError):
    return JSONResponse(status_code=500,
                        content={"detail": {"kind": "internal", "message": str(exc)}})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest):
    out = commands.classify_point(req.eta0p, req.eta1p, req.nbar, req.tprime,
                                  req.tol)
    return ClassifyResponse(
        eta0p=out.eta0p, eta1p=out.eta1p, nbar=out.nbar,
        tprime=json_safe(out.tprime), zeta0=out.zeta0, zeta1=out.zeta1,
        nprime=out.nprime,
        entries={k: json_safe(v) for k, v in out.entries.items()},
        ppt=list(out.ppt),
        min_eigs=None if out.min_eigs is None else [float(e) for e in out.min_eigs],
        state_class=out.label, marginal=out.marginal, method=out.method,
        report=out.report)


def _csv_response(result):
    return CsvResponse(columns=list(result.columns), rows=result.rows,
                       csv=result.csv, meta=result.meta)


@app.post("/evolve", response_model=CsvResponse)
def evolve(req: EvolveRequest):
    return _csv_response(commands.evolve_trace(
        req.eta0p, req.eta1p, req.nbar, req.tmax, req.steps, req.tol, req.jobs))


@app.post("/boundary", response_model=CsvResponse)
def boundary(req: BoundaryRequest):
    axes = [Axis(a.name, a.start, a.stop, a.count) for a in req.axes]
    return _csv_response(commands.boundary_sweep(
        axes, req.fixed, req.which, req.check, req.jobs))


@app.post("/figure", response_model=CsvResponse)
def figure(req: FigureRequest):
    return _csv_response(commands.figure_data(req.n, req.jobs))


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest):
    report = commands.verification(req.level)
    return VerifyResponse(
        level=report.level, passed=report.passed,
        suites=[SuiteModel(name=s.name, passed=s.passed, max_dev=s.max_dev,
                           threshold=s.threshold, checks=s.checks, detail=s.detail)
                for s in report.suites],
        report=report.text())
