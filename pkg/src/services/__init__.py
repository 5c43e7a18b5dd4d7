"""
Services package.
"""
from src.services.mwu_service import RoutingBuilder, compute_routing
from src.services.routing_service import RoutingService, query_flow

__all__ = ['RoutingBuilder', 'RoutingService', 'compute_routing', 'query_flow']
