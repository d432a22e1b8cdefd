from fastapi import APIRouter, HTTPException, Depends
from app.models.models import CheckResponse
from app.services.check_service import CheckService
import logging

router = APIRouter()
logger = logging.getLogger(__name__)

def get_check_service():
    return CheckService()

@router.get("/check", response_model=CheckResponse, tags=["Check"])
def run_checks(check_service: CheckService = Depends(get_check_service)):
    """
    Run the verification suite.

    Returns every check with PASS, FAIL or EXPECTED-DISCREPANCY; `passed` is
    false when any check fails.
    """
    try:
        logger.info("Running verification suite")
        report = check_service.run()
        return CheckResponse(passed=report.passed, results=report.results)
    except Exception as e:
        logger.exception(f"Unexpected error in run_checks: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
