"""FastAPI application for the infinity analysis toolkit."""

import logging
from contextlib import asynccontextmanager
from typing import Any, Dict, Optional

from fastapi import Body, FastAPI, HTTPException, status
from fastapi.middleware.cors import CORSMiddleware
from pydantic import ValidationError

from .analyzer import InfinityAnalyzer
from .config import settings
from .exceptions import AnalysisError, InputError
from .models import (
    CoeffsRequest,
    CyclesRequest,
    HealthResponse,
    RegionRequest,
    UnfoldRequest,
)
from .params import parse_spec_document
from .serialization import to_jsonable

# Configure logging
logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Global service instance
analyzer: Optional[InfinityAnalyzer] = None


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan manager."""
    global analyzer

    # Startup
    logger.info("Starting infinity analyzer...")
    analyzer = InfinityAnalyzer()
    logger.info("Infinity analyzer started successfully")

    yield

    # Shutdown
    logger.info("Shutting down infinity analyzer...")


# Create FastAPI application
app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Periodic orbit at infinity of planar piecewise linear systems",
    lifespan=lifespan,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


def _service() -> InfinityAnalyzer:
    if analyzer is None:
        raise HTTPException(
            status_code=status.HTTP_503_SERVICE_UNAVAILABLE,
            detail="Analyzer is not initialized",
        )
    return analyzer


def _failure(action: str, error: Exception) -> HTTPException:
    """Map analysis errors to HTTP errors."""
    logger.error(f"Error {action}: {error}")
    if isinstance(error, (InputError, ValidationError)):
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    else:
        code = status.HTTP_409_CONFLICT
    return HTTPException(status_code=code, detail=f"{type(error).__name__}: {error}")


@app.get("/", response_model=HealthResponse)
async def root():
    """Root endpoint - health check."""
    return HealthResponse(
        status="healthy",
        app_name=settings.app_name,
        version=settings.app_version,
    )


@app.get("/health", response_model=HealthResponse)
async def health_check():
    """Health check endpoint."""
    return HealthResponse(
        status="healthy",
        app_name=settings.app_name,
        version=settings.app_version,
    )


@app.post("/classify")
def classify(document: Dict[str, Any] = Body(...), tolerance: Optional[float] = None):
    """
    Classify the periodic orbit at infinity.

    Args:
        document: Parameter document, same schema as the CLI input files
        tolerance: Optional vanishing tolerance

    Returns:
        Verdict with witnesses
    """
    service = _service()
    try:
        spec = parse_spec_document(document).spec
        return to_jsonable(service.classify(spec, tolerance))
    except (AnalysisError, ValidationError) as e:
        raise _failure("classifying", e)


@app.post("/coeffs")
def coefficients(request: CoeffsRequest):
    """
    Series coefficients of the half-return maps and of the displacement.

    Args:
        request: Parameter document and truncation order

    Returns:
        Coefficients from the recurrence and the closed forms
    """
    service = _service()
    try:
        spec = parse_spec_document(request.spec).spec
        return to_jsonable(service.coefficients(spec, request.order))
    except (AnalysisError, ValidationError) as e:
        raise _failure("computing coefficients", e)


@app.post("/cycles")
def cycles(request: CyclesRequest):
    """Limit cycles near infinity."""
    service = _service()
    try:
        spec = parse_spec_document(request.spec).spec
        return to_jsonable(service.cycles(spec, request.u0_max, request.grid))
    except (AnalysisError, ValidationError) as e:
        raise _failure("finding cycles", e)


@app.post("/unfold")
def unfold(request: UnfoldRequest):
    """Parameters realizing a target near the third-order weak focus."""
    service = _service()
    try:
        return to_jsonable(service.unfold(request.gamma_L, request.x_L, request.target))
    except AnalysisError as e:
        raise _failure("unfolding", e)


@app.post("/region")
def region(request: RegionRequest):
    """Boundary curves and region labels of the model map."""
    service = _service()
    return to_jsonable(service.region(request.delta3, request.window, request.resolution))


@app.get("/example")
def example():
    """Rerun the worked example with its checks."""
    service = _service()
    try:
        outputs, passed = service.reproduce_example()
    except AnalysisError as e:
        raise _failure("reproducing the example", e)
    return to_jsonable({"passed": passed, **outputs})


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
