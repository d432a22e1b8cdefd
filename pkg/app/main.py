from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
import logging
from dotenv import load_dotenv

from app import __version__
from app.routers import check, pipeline, sweep

# Load environment variables
load_dotenv()

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

# Create FastAPI app
app = FastAPI(
    title="unruh-filter-lab",
    description="Negativity of a qubit-qutrit state under Unruh acceleration and local filtering",
    version=__version__,
)

# Add CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],  # In production, replace with specific origins
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(pipeline.router, prefix="/api/v1", tags=["Pipeline"])
app.include_router(sweep.router, prefix="/api/v1", tags=["Sweep"])
app.include_router(check.router, prefix="/api/v1", tags=["Check"])

# Root endpoint
@app.get("/")
async def root():
    return {
        "message": "unruh-filter-lab",
        "docs": "/docs",
        "version": __version__,
    }

# Health check endpoint
@app.get("/health")
async def health_check():
    return {"status": "healthy"}

if __name__ == "__main__":
    import uvicorn
    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=True)
