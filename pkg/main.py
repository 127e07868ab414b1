# main.py

from fastapi import FastAPI, HTTPException, Query, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel
from typing import Optional
import os
from dotenv import load_dotenv
import logging

from arrangement import raise_for_violations, validate_arrangement
from blowup_engine import principalize_many
from chart_oracle import verify_trace
from constants import ENV_LOG_LEVEL, LOG_FORMAT
from dot_export import export_dot
from errors import EngineError, InputError, OracleError, OracleScopeError
from invariants import is_sum_locally_principal, sigma
from models import BlowupState, InstanceFile, SigmaReport, Trace, VerificationReport
from cli import default_max_steps

# Load environment variables from .env file
load_dotenv()

# Configure logging
logging.basicConfig(
    level=getattr(logging, os.getenv(ENV_LOG_LEVEL, "INFO").upper(), logging.INFO),
    format=LOG_FORMAT,
    handlers=[
        logging.StreamHandler()
    ]
)
logger = logging.getLogger(__name__)

# Initialize FastAPI app
app = FastAPI(
    title="Principalization API",
    description="Principalization of c.i. monomial ideal sums by codimension-2 blow-ups",
    version="1.0.0"
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True, allow_methods=["*"],
    allow_headers=["*"],
)

# Pydantic Schemas

class SigmaResponse(BaseModel):
    report: SigmaReport
    locally_principal: bool


class VerifyRequest(BaseModel):
    instance: InstanceFile
    trace: Trace


# Utility Functions

def build_state(instance: InstanceFile) -> BlowupState:
    arrangement = instance.to_arrangement()
    divisors = instance.to_divisors()
    try:
        raise_for_violations(validate_arrangement(arrangement, divisors))
    except InputError as e:
        detail = f"{type(e).__name__}: {e}"
        logger.warning(f"Rejected instance: {detail}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=detail)
    return BlowupState(arrangement=arrangement, divisors=tuple(divisors))


# API Routes

@app.get("/health")
def health():
    return {"status": "ok"}


## Principalize an instance

@app.post("/principalize", response_model=Trace)
def principalize(instance: InstanceFile, max_steps: Optional[int] = Query(None, ge=0)):
    logger.info(f"Principalizing {len(instance.divisors)} divisors on {len(instance.divisor_names)} supports")
    state = build_state(instance)
    try:
        cap = max_steps if max_steps is not None else default_max_steps()
        if cap < 0:
            raise ValueError(f"The step cap must be nonnegative, got {cap}.")
    except ValueError as e:
        logger.warning(f"Rejected step cap: {e}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    try:
        _, trace = principalize_many(state, max_steps=cap)
    except EngineError as e:
        logger.error(f"Principalization failed: {e}")
        raise HTTPException(status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=str(e))
    logger.info(f"Principalized after {trace.blowup_count} blow-up(s).")
    return trace


## Invariant of the first two divisors

@app.post("/sigma", response_model=SigmaResponse)
def compute_sigma(instance: InstanceFile):
    state = build_state(instance)
    nerve = state.arrangement.nerve
    report = sigma(state.divisors[0], state.divisors[1], nerve)
    return SigmaResponse(
        report=report,
        locally_principal=is_sum_locally_principal(state.divisors, nerve),
    )


## Verify a trace in toric charts

@app.post("/verify", response_model=VerificationReport)
def verify(request: VerifyRequest):
    instance = request.instance
    if not instance.toric or not instance.is_full_nerve:
        logger.warning("Verification requested for a non-toric instance.")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST,
                            detail="Verification needs a toric instance with nerve \"full\".")
    try:
        report = verify_trace(len(instance.divisor_names), instance.coefficient_matrix(), request.trace)
    except (OracleScopeError, InputError) as e:
        logger.warning(f"Verification rejected: {e}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
    except OracleError as e:
        logger.error(f"Verification failed: {e}")
        raise HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(e))
    logger.info(f"Verification finished: {report.leaf_count} leaves, ok={report.ok}")
    return report


## Export the blow-up tower

@app.post("/export_dot", response_class=PlainTextResponse)
def export_dot_endpoint(trace: Trace):
    try:
        return export_dot(trace)
    except (InputError, EngineError) as e:
        logger.warning(f"Cannot export trace: {e}")
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(e))
