"""
FastAPI Backend for the Coboson Wigner Molecule toolkit
Main app initialization and router registration only
"""
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import uvicorn

from api.cobosons import router as cobosons_router
from api.density import router as density_router
from api.spectrum import router as spectrum_router
from config import settings
from utils.errors import CobosonError
from utils.logs import configure_logging


app = FastAPI(
    title=settings.API_TITLE,
    description=settings.API_DESCRIPTION,
    version=settings.API_VERSION
)

# Configure CORS for browser clients
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Register routers
app.include_router(spectrum_router)
app.include_router(cobosons_router)
app.include_router(density_router)


@app.exception_handler(CobosonError)
async def coboson_error_handler(request: Request, exc: CobosonError):
    """Failures that escape a router keep their category's status code"""
    return JSONResponse(status_code=exc.status_code, content=exc.to_dict())


@app.get("/")
async def root():
    """Health check endpoint"""
    return {
        "status": "healthy",
        "service": settings.API_TITLE,
        "version": settings.API_VERSION
    }


@app.get("/health")
async def health_check():
    """Detailed health check with the active numerical settings"""
    return {
        "status": "healthy",
        "message": "Backend is running smoothly",
        "numerics": settings.numerics()
    }


def serve() -> None:
    configure_logging()
    uvicorn.run(
        "main:app",
        host=settings.HOST,
        port=settings.PORT,
        reload=settings.RELOAD,
        log_level=settings.LOG_LEVEL
    )


if __name__ == "__main__":
    serve()
