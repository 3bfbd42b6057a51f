from itertools import product
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy

from giftmania.errors import GameInputError

JointAction = Tuple[int, ...]


class NormalFormGame:
    """
    N-player normal-form game stored as one dense payoff tensor.

    `payoffs[i][s]` is the payoff of player i under joint action s, so the tensor has shape
    (N, |S_1|, ..., |S_N|). Instances are read-only after construction.
    """

    def __init__(self, payoffs, labels: Optional[Sequence[Sequence[str]]] = None):
        tensor = numpy.array(payoffs, dtype=float)
        if tensor.ndim < 2 or tensor.shape[0] != tensor.ndim - 1:
            raise GameInputError(f'payoff tensor of shape {tensor.shape} is not (N, |S_1|, ..., |S_N|)')
        if min(tensor.shape[1:]) < 1:
            raise GameInputError('every player needs at least one action')
        if not numpy.isfinite(tensor).all():
            raise GameInputError('payoffs must be finite')
        tensor.setflags(write=False)

        self.payoffs = tensor
        self.num_players = tensor.shape[0]
        self.action_counts = tuple(int(n) for n in tensor.shape[1:])

        if labels is None:
            labels = [[f'Action {k + 1}' for k in range(n)] for n in self.action_counts]
        if len(labels) != self.num_players or \
                any(len(ls) != n for ls, n in zip(labels, self.action_counts)):
            raise GameInputError('labels must name every action of every player')
        self.labels = tuple(tuple(str(label) for label in ls) for ls in labels)

    def joint_actions(self) -> Iterator[JointAction]:
        return product(*(range(n) for n in self.action_counts))

    def total_payoff(self, joint: JointAction) -> float:
        return float(sum(payoff_of(self, joint)))

    def label_of(self, joint: JointAction) -> Tuple[str, ...]:
        return tuple(self.labels[i][k] for i, k in enumerate(joint))

    @property
    def base_game(self) -> 'NormalFormGame':
        return self

    def base_action(self, player: int, action: int) -> int:
        return action

    def gift_of(self, player: int, action: int) -> float:
        return 0.0

    def gift_mask(self, player: int) -> numpy.ndarray:
        return numpy.zeros(self.action_counts[player], dtype=bool)

    def __eq__(self, other):
        return isinstance(other, NormalFormGame) and \
               self.payoffs.shape == other.payoffs.shape and \
               bool((self.payoffs == other.payoffs).all()) and \
               self.labels == other.labels

    def __repr__(self):
        return f'{type(self).__name__}(num_players={self.num_players}, action_counts={self.action_counts})'


def validate_joint(game: NormalFormGame, joint: Sequence[int]) -> JointAction:
    if len(joint) != game.num_players:
        raise GameInputError(f'joint action {tuple(joint)} does not have {game.num_players} components')
    for player, (action, count) in enumerate(zip(joint, game.action_counts)):
        if not 0 <= int(action) < count:
            raise GameInputError(f'action {action} of player {player} is outside [0, {count})')
    return tuple(int(action) for action in joint)


def payoff_of(game: NormalFormGame, joint: Sequence[int]) -> List[float]:
    """
    API to read the payoff of every player under one joint action.

    Args:
        game: target game
        joint: one action index per player
    Returns:
        list of N payoffs
    Examples:
        >>> game = NormalFormGame([[[2, -6], [1, 1]], [[2, 1], [-6, 1]]], labels=[['Hunt', 'Forage']] * 2)
        >>> payoff_of(game, (0, 0))
        [2.0, 2.0]
        >>> payoff_of(game, (0, 1))
        [-6.0, 1.0]
        >>> payoff_of(game, (0, 2))
        Traceback (most recent call last):
            ...
        giftmania.errors.GameInputError: action 2 of player 1 is outside [0, 2)
    """
    joint = validate_joint(game, joint)
    return [float(v) for v in game.payoffs[(slice(None),) + joint]]
