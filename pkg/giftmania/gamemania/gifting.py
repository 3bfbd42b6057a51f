from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy

from giftmania.errors import GameInputError
from giftmania.gamemania.game import NormalFormGame

GLOBAL_SPLIT = 'global'
NEIGHBOR_SPLIT = 'neighbors'


@dataclass(frozen=True)
class GiftSet:
    """
    Gift amounts available to each player. Values are kept sorted, so gift index 0 is always the zero gift.
    """
    values: Tuple[Tuple[float, ...], ...]

    def __post_init__(self):
        normalized = []
        for player, gifts in enumerate(self.values):
            gifts = [float(g) for g in gifts]
            if any(not numpy.isfinite(g) or g < 0 for g in gifts):
                raise GameInputError(f'gift set of player {player} contains a negative or non-finite value')
            if 0.0 not in gifts:
                raise GameInputError(f'gift set of player {player} does not contain 0')
            normalized.append(tuple(sorted(set(gifts))))
        object.__setattr__(self, 'values', tuple(normalized))

    @classmethod
    def uniform(cls, num_players: int, gifts: Sequence[float]) -> 'GiftSet':
        return cls(tuple(tuple(gifts) for _ in range(num_players)))

    @classmethod
    def binary(cls, num_players: int, gamma: float = 10.0) -> 'GiftSet':
        """
        The {0, gamma} set for every player; gamma = 0 gives the identity extension.

        >>> GiftSet.binary(2, 10).values
        ((0.0, 10.0), (0.0, 10.0))
        >>> GiftSet.binary(2, 0).values
        ((0.0,), (0.0,))
        """
        return cls.uniform(num_players, (0.0, gamma))

    @property
    def num_players(self) -> int:
        return len(self.values)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(len(g) for g in self.values)


def gift_transfer(gifts: Sequence[float], neighbors: Optional[Sequence[Sequence[int]]] = None) -> numpy.ndarray:
    """
    API to compute the zero-sum payoff shift caused by a gift vector.

    Every player loses its own gift; the gift is split equally among all other players, or among the
    player's graph neighbours when `neighbors` is given.

    Args:
        gifts: one nonnegative gift per player
        neighbors: optional neighbour list per player
    Returns:
        payoff shift per player, summing to zero
    Examples:
        >>> gift_transfer([0, 0]).tolist()
        [0.0, 0.0]
        >>> gift_transfer([10, 0]).tolist()
        [-10.0, 10.0]
        >>> gift_transfer([6, 0, 0]).tolist()
        [-6.0, 3.0, 3.0]
        >>> gift_transfer([6, 0, 0], neighbors=[[1], [0, 2], [1]]).tolist()
        [-6.0, 6.0, 0.0]
    """
    g = numpy.asarray(gifts, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise GameInputError('gift transfer needs at least two players')
    if not numpy.isfinite(g).all() or (g < 0).any():
        raise GameInputError('gifts must be finite and nonnegative')

    if neighbors is None:
        return -g + (g.sum() - g) / (g.size - 1)

    if len(neighbors) != g.size:
        raise GameInputError('neighbour lists must be given for every player')
    received = numpy.zeros_like(g)
    for giver, nbrs in enumerate(neighbors):
        if len(nbrs) == 0:
            raise GameInputError(f'player {giver} has no neighbour to receive its gift')
        for receiver in nbrs:
            received[receiver] += g[giver] / len(nbrs)
    return received - g


class GiftedGame(NormalFormGame):
    """
    Game whose actions are (base action, gift) pairs.

    Extended action k of player i stands for base action `k % |S_i|` with gift index `k // |S_i|`,
    so the zero-gift actions come first, in base order (Hunt, Forage, Hunt+gift, Forage+gift).
    """

    def __init__(self, payoffs, labels, base: NormalFormGame, gifts: GiftSet, split: str = GLOBAL_SPLIT):
        super().__init__(payoffs, labels)
        self.base = base
        self.gifts = gifts
        self.split = split

    @property
    def base_game(self) -> NormalFormGame:
        return self.base

    def base_action(self, player: int, action: int) -> int:
        return action % self.base.action_counts[player]

    def gift_index(self, player: int, action: int) -> int:
        return action // self.base.action_counts[player]

    def gift_of(self, player: int, action: int) -> float:
        return self.gifts.values[player][self.gift_index(player, action)]

    def gift_mask(self, player: int) -> numpy.ndarray:
        return numpy.arange(self.action_counts[player]) >= self.base.action_counts[player]

    def extended_action(self, player: int, base_action: int, gift_index: int = 0) -> int:
        return gift_index * self.base.action_counts[player] + base_action

    def zero_gift_profile(self, base_joint) -> tuple:
        return tuple(self.extended_action(i, s) for i, s in enumerate(base_joint))


def _gift_label(label: str, gift: float) -> str:
    return label if gift == 0 else f'{label}+{gift:g}'


def extend_with_gifting(game: NormalFormGame, gifts: GiftSet, split: str = GLOBAL_SPLIT) -> GiftedGame:
    """
    API to extend a game with zero-sum gifting actions.

    Args:
        game: base game, left unmodified
        gifts: gift amounts per player
        split: `global` splits each gift among all other players, `neighbors` among graph neighbours
            (only for graph games)
    Returns:
        gifted game with |S_i| * |G_i| actions per player
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> gifted = extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10))
        >>> gifted.action_counts
        (4, 4)
        >>> gifted.labels[0]
        ('Hunt', 'Forage', 'Hunt+10', 'Forage+10')
        >>> gifted.payoffs[:, 2, 1].tolist()
        [-16.0, 11.0]
        >>> gifted.payoffs[:, 0, 0].tolist()
        [2.0, 2.0]
    """
    if gifts.num_players != game.num_players:
        raise GameInputError(f'gift set covers {gifts.num_players} players, game has {game.num_players}')
    if isinstance(game, GiftedGame):
        raise GameInputError('game is already extended with gifting')

    if split == GLOBAL_SPLIT:
        neighbors = None
    elif split == NEIGHBOR_SPLIT:
        graph = getattr(game, 'graph', None)
        if graph is None:
            raise GameInputError('neighbour split needs a graph game')
        neighbors = [sorted(graph.neighbors(i)) for i in range(game.num_players)]
    else:
        raise GameInputError(f'unknown gift split {split!r}')

    if game.num_players == 1:
        if gifts.sizes != (1,):
            raise GameInputError('a single player has nobody to gift to')
        sigma = numpy.zeros((1, 1))
    else:
        sigma = numpy.zeros((game.num_players,) + gifts.sizes)
        for gift_joint in numpy.ndindex(*gifts.sizes):
            g = [gifts.values[i][k] for i, k in enumerate(gift_joint)]
            sigma[(slice(None),) + gift_joint] = gift_transfer(g, neighbors)

    base_maps = [numpy.tile(numpy.arange(n), m) for n, m in zip(game.action_counts, gifts.sizes)]
    gift_maps = [numpy.repeat(numpy.arange(m), n) for n, m in zip(game.action_counts, gifts.sizes)]
    payoffs = game.payoffs[(slice(None),) + numpy.ix_(*base_maps)] + \
              sigma[(slice(None),) + numpy.ix_(*gift_maps)]

    labels = [[_gift_label(game.labels[i][s], gifts.values[i][k]) for s, k in zip(base_maps[i], gift_maps[i])]
              for i in range(game.num_players)]
    return GiftedGame(payoffs, labels, base=game, gifts=gifts, split=split)
