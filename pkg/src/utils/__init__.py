"""
Utilities package.
"""
from src.utils.errors import OblivRouteError
from src.utils.log import SERVICE_NAME, configure_logger

__all__ = ['OblivRouteError', 'SERVICE_NAME', 'configure_logger']
