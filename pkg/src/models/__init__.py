"""
Models package.
"""
from src.models.config import MWUConfig, NormMode, SolverConfig, SolverMode
from src.models.graph import DemandVector, EdgeWeights, FlowVector, Graph
from src.models.loads import LoadKind, LoadVector, PiMatrix
from src.models.scheme import DemandPairList, MWUState, RepresentationTable, RoutingScheme

__all__ = [
    'DemandPairList',
    'DemandVector',
    'EdgeWeights',
    'FlowVector',
    'Graph',
    'LoadKind',
    'LoadVector',
    'MWUConfig',
    'MWUState',
    'NormMode',
    'PiMatrix',
    'RepresentationTable',
    'RoutingScheme',
    'SolverConfig',
    'SolverMode',
]
