from typing import List

from fastapi import APIRouter, HTTPException, Depends, Query
from app.errors import LabError
from app.models.models import MU_MAX, FilterMode, ScenarioConfig, SweepResult
from app.services.sweep_service import FIGURE_IDS, SweepService
import logging

router = APIRouter()
logger = logging.getLogger(__name__)

def get_sweep_service():
    return SweepService()

@router.post("/sweep", response_model=SweepResult, tags=["Sweep"])
def run_sweep(
    request: ScenarioConfig,
    sweep_service: SweepService = Depends(get_sweep_service)
):
    """
    Sweep negativity over one scenario's grid.

    - **mu**: Family parameter in [0, 0.5]
    - **accelerated**: qubit or qutrit
    - **filtered**: Optional local filter (target, strength, mode, pair_policy)
    - **r_grid**: Strictly increasing Rindler parameters within [0, pi/4]
    - **strength_grid**: Optional strengths to sweep at each r

    Returns one row per grid point; rows whose post-selection failed carry a null negativity.
    """
    try:
        logger.info(f"Running sweep '{request.label}' at mu={request.mu}")
        return sweep_service.run_scenario(request)
    except LabError as e:
        logger.error(f"Error running sweep: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception(f"Unexpected error in run_sweep: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")

@router.get("/figures/{figure_id}", response_model=List[SweepResult], tags=["Sweep"])
def run_figure(
    figure_id: int,
    mu: float = Query(..., ge=0.0, le=MU_MAX, description="Family parameter"),
    mode: FilterMode = Query(FilterMode.POSTSELECT, description="Qutrit filter mode"),
    sweep_service: SweepService = Depends(get_sweep_service)
):
    """
    Compute every curve of a figure preset (ids 1..6).
    """
    if figure_id not in FIGURE_IDS:
        raise HTTPException(status_code=404, detail=f"Unknown figure id {figure_id}")
    try:
        logger.info(f"Computing figure {figure_id} at mu={mu}, mode={mode.value}")
        return sweep_service.run_figure(figure_id, mu, mode)
    except LabError as e:
        logger.error(f"Error computing figure {figure_id}: {e}")
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception(f"Unexpected error in run_figure: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
