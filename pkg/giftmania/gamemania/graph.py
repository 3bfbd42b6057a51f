from itertools import product
from typing import Iterable, Optional, Tuple

import networkx
import numpy

from giftmania.errors import GameInputError
from giftmania.gamemania.coordination import MEDIUM_RISK, stag_hunt
from giftmania.gamemania.game import NormalFormGame


class GraphGame(NormalFormGame):
    """
    N-player game where every agent plays the symmetric 2-player `stage` game against each graph neighbour
    with a single action, and receives the mean of those stage payoffs.
    """

    def __init__(self, graph: networkx.Graph, stage: NormalFormGame, labels=None):
        self.graph = graph
        self.stage = stage
        num_agents = graph.number_of_nodes()
        counts = (stage.action_counts[0],) * num_agents

        row_payoff = stage.payoffs[0]
        neighbors = [sorted(graph.neighbors(i)) for i in range(num_agents)]
        payoffs = numpy.zeros((num_agents,) + counts)
        for joint in product(*(range(n) for n in counts)):
            for i in range(num_agents):
                payoffs[(i,) + joint] = numpy.mean([row_payoff[joint[i], joint[j]] for j in neighbors[i]])

        if labels is None:
            labels = [stage.labels[0]] * num_agents
        super().__init__(payoffs, labels)

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(tuple(sorted(e)) for e in self.graph.edges()))


def _check_graph(graph: networkx.Graph):
    if sorted(graph.nodes()) != list(range(graph.number_of_nodes())):
        raise GameInputError('graph agents must be numbered 0..N-1')
    if graph.number_of_nodes() < 2:
        raise GameInputError('a graph game needs at least two agents')
    isolated = sorted(networkx.isolates(graph))
    if isolated:
        raise GameInputError(f'agents {isolated} have no neighbour')
    if networkx.number_of_selfloops(graph):
        raise GameInputError('agents cannot play against themselves')


def make_graph_stag_hunt(num_agents: int, edges: Optional[Iterable[Tuple[int, int]]] = None,
                         r: float = MEDIUM_RISK) -> GraphGame:
    """
    API to build a Stag Hunt played on the edges of an undirected graph.

    Args:
        num_agents: number of agents N
        edges: undirected edges; a fully connected graph when omitted
        r: reward for hunting alone in every stage game
    Returns:
        N-player graph game
    Examples:
        >>> fc3 = make_graph_stag_hunt(3, r=-6)
        >>> fc3.payoffs[:, 0, 0, 0].tolist()
        [2.0, 2.0, 2.0]
        >>> fc3.payoffs[:, 0, 1, 1].tolist()
        [-6.0, 1.0, 1.0]
        >>> make_graph_stag_hunt(3, edges=[(0, 1)])
        Traceback (most recent call last):
            ...
        giftmania.errors.GameInputError: agents [2] have no neighbour
    """
    graph = networkx.Graph()
    graph.add_nodes_from(range(num_agents))
    if edges is None:
        graph.add_edges_from(networkx.complete_graph(num_agents).edges())
    else:
        graph.add_edges_from(edges)
    _check_graph(graph)
    return GraphGame(graph, stag_hunt(r))
