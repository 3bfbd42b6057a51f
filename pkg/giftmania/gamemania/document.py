from typing import Any, Dict

import networkx
import numpy
import yaml

from giftmania.errors import GameInputError
from giftmania.gamemania.game import NormalFormGame
from giftmania.gamemania.gifting import GLOBAL_SPLIT, GiftSet, GiftedGame, extend_with_gifting
from giftmania.gamemania.graph import GraphGame, _check_graph
from giftmania.gamemania.repeated import RepeatedGame

NORMAL_FORM = 'normal-form'
GIFTED = 'gifted'
GRAPH = 'graph'
REPEATED = 'repeated'

_KEYS = {
    NORMAL_FORM: {'kind', 'players', 'actions', 'payoffs'},
    GIFTED: {'kind', 'base', 'gifts', 'split'},
    GRAPH: {'kind', 'players', 'edges', 'stage'},
    REPEATED: {'kind', 'horizon', 'stage'},
}


def game_to_document(game) -> Dict[str, Any]:
    """
    API to describe a game as a plain dict ready for `yaml.safe_dump`.

    Payoffs are stored as one row-major list per player. Gifted, graph and repeated games nest the document
    of the game they are built from under `base` or `stage`.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> doc = game_to_document(stag_hunt(-6))
        >>> doc['kind'], doc['players'], doc['actions']
        ('normal-form', 2, [['Hunt', 'Forage'], ['Hunt', 'Forage']])
        >>> doc['payoffs']
        [[2.0, -6.0, 1.0, 1.0], [2.0, 1.0, -6.0, 1.0]]
    """
    if isinstance(game, RepeatedGame):
        return {'kind': REPEATED, 'horizon': game.horizon, 'stage': game_to_document(game.stage)}
    if isinstance(game, GiftedGame):
        return {'kind': GIFTED, 'base': game_to_document(game.base),
                'gifts': [list(g) for g in game.gifts.values], 'split': game.split}
    if isinstance(game, GraphGame):
        return {'kind': GRAPH, 'players': game.num_players,
                'edges': [list(e) for e in game.edges], 'stage': game_to_document(game.stage)}
    return {'kind': NORMAL_FORM, 'players': game.num_players,
            'actions': [list(labels) for labels in game.labels],
            'payoffs': [game.payoffs[i].ravel().tolist() for i in range(game.num_players)]}


def _check_keys(document: Dict[str, Any]) -> str:
    kind = document.get('kind', NORMAL_FORM)
    if kind not in _KEYS:
        raise GameInputError(f'unknown game kind {kind!r}')
    unknown = sorted(set(document) - _KEYS[kind])
    if unknown:
        raise GameInputError(f'unknown keys {unknown} in {kind} game document')
    return kind


def game_from_document(document: Dict[str, Any]):
    """
    API to rebuild a game from the output of `game_to_document`.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
        >>> gifted = extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10))
        >>> game_from_document(game_to_document(gifted)) == gifted
        True
        >>> game_from_document({'kind': 'normal-form', 'players': 2, 'actions': [['a'], ['b']], 'payoffs': [[1]]})
        Traceback (most recent call last):
            ...
        giftmania.errors.GameInputError: payoffs must list 2 players with 1 entries each
    """
    kind = _check_keys(document)

    if kind == REPEATED:
        return RepeatedGame(game_from_document(document['stage']), int(document.get('horizon', 1)))
    if kind == GIFTED:
        base = game_from_document(document['base'])
        return extend_with_gifting(base, GiftSet(tuple(tuple(g) for g in document['gifts'])),
                                   document.get('split', GLOBAL_SPLIT))
    if kind == GRAPH:
        graph = networkx.Graph()
        graph.add_nodes_from(range(int(document['players'])))
        graph.add_edges_from(tuple(e) for e in document['edges'])
        _check_graph(graph)
        return GraphGame(graph, game_from_document(document['stage']))

    actions = document['actions']
    counts = tuple(len(labels) for labels in actions)
    players = int(document.get('players', len(actions)))
    payoffs = document['payoffs']
    if players != len(actions) or len(payoffs) != players or \
            any(len(p) != int(numpy.prod(counts)) for p in payoffs):
        raise GameInputError(f'payoffs must list {players} players with {int(numpy.prod(counts))} entries each')
    return NormalFormGame(numpy.array(payoffs, dtype=float).reshape((players,) + counts), actions)


def load_game_document(path: str):
    """API to read a game from a YAML document."""
    with open(path) as f:
        document = yaml.safe_load(f)
    if not isinstance(document, dict):
        raise GameInputError(f'{path} does not hold a game document')
    return game_from_document(document)


def dump_game_document(game, path: str):
    with open(path, 'w') as f:
        yaml.safe_dump(game_to_document(game), f, sort_keys=False)
