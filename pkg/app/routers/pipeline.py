from fastapi import APIRouter, HTTPException, Depends
from app.errors import PipelineError, PipelineEvalError
from app.models.models import EvalRequest, EvalResponse
from app.services.output_service import OutputService
from unruh_filter_lab.pipeline import evaluate
import logging

router = APIRouter()
logger = logging.getLogger(__name__)

def get_output_service():
    return OutputService()

@router.post("/eval", response_model=EvalResponse, tags=["Pipeline"])
async def eval_pipeline(
    request: EvalRequest,
    output_service: OutputService = Depends(get_output_service)
):
    """
    Evaluate a channel pipeline.

    - **pipeline**: Expression such as `state(mu=0.25) | accel(part=qubit, r=0.6) | negativity`

    Returns the scalar for a trailing `negativity`, otherwise the final state dump.
    Syntax and semantic errors return 400 with the byte offset, expected tokens
    and offending lexeme; a failing stage returns 422.
    """
    try:
        logger.info(f"Evaluating pipeline: {request.pipeline}")
        result = evaluate(request.pipeline)
        return EvalResponse(
            kind=result.kind,
            value=result.value,
            dims=list(result.state.dims),
            dump=output_service.format_dump(result.state) if result.kind == "dump" else None,
        )
    except PipelineEvalError as e:
        logger.error(f"Pipeline evaluation failed: {e}")
        raise HTTPException(status_code=422, detail=e.to_dict())
    except PipelineError as e:
        logger.error(f"Invalid pipeline: {e}")
        raise HTTPException(status_code=400, detail=e.to_dict())
    except Exception as e:
        logger.exception(f"Unexpected error in eval_pipeline: {str(e)}")
        raise HTTPException(status_code=500, detail=f"Internal server error: {str(e)}")
