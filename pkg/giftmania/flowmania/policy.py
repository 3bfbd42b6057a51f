from typing import List, Sequence

import numpy
from scipy.special import softmax

from giftmania.errors import GameInputError
from giftmania.gamemania.game import NormalFormGame

_AXES = 'abcdefghijklmnopqrstuvwxy'


def softmax_policy(logits) -> numpy.ndarray:
    """
    API to turn softmax logits into action probabilities. The last axis holds the actions, so a batch of
    logit vectors is converted row by row.

    Examples:
        >>> softmax_policy([0, 0, 0, 0]).tolist()
        [0.25, 0.25, 0.25, 0.25]
        >>> numpy.round(softmax_policy([numpy.log(2), 0]), 12).tolist()
        [0.666666666667, 0.333333333333]
        >>> softmax_policy([1000, 0, 0, 0]).round(6).tolist()
        [1.0, 0.0, 0.0, 0.0]
        >>> softmax_policy([numpy.nan, 0])
        Traceback (most recent call last):
            ...
        giftmania.errors.GameInputError: logits must be finite
    """
    logits = numpy.asarray(logits, dtype=float)
    if not numpy.isfinite(logits).all():
        raise GameInputError('logits must be finite')
    return softmax(logits, axis=-1)


def _check_policies(game: NormalFormGame, policies: Sequence) -> List[numpy.ndarray]:
    if len(policies) != game.num_players:
        raise GameInputError(f'expected {game.num_players} policies, got {len(policies)}')
    checked = []
    for i, logits in enumerate(policies):
        logits = numpy.asarray(logits, dtype=float)
        if logits.shape[-1] != game.action_counts[i]:
            raise GameInputError(f'policy of player {i} has {logits.shape[-1]} logits, '
                                 f'the game has {game.action_counts[i]} actions')
        checked.append(logits)
    return checked


def action_values(game: NormalFormGame, probabilities: Sequence[numpy.ndarray]) -> List[numpy.ndarray]:
    """
    API to compute each player's expected payoff of every own action against the other players' mixed
    strategies. Probabilities are batches of shape (B, |S_i|).
    """
    n = game.num_players
    axes = _AXES[:n]
    values = []
    for i in range(n):
        others = [k for k in range(n) if k != i]
        subscripts = axes + ''.join(f',z{axes[k]}' for k in others) + f'->z{axes[i]}'
        values.append(numpy.einsum(subscripts, game.payoffs[i], *(probabilities[k] for k in others)))
    return values


def _batched(game: NormalFormGame, policies: Sequence):
    logits = _check_policies(game, policies)
    single = logits[0].ndim == 1
    probabilities = [numpy.atleast_2d(softmax_policy(x)) for x in logits]
    return single, probabilities, action_values(game, probabilities)


def expected_payoff(game: NormalFormGame, policies: Sequence) -> numpy.ndarray:
    """
    API to compute every player's exact expected payoff when each player follows a softmax policy.

    Args:
        game: N-player game
        policies: one logit vector (or a batch of shape (B, |S_i|)) per player
    Returns:
        expected payoffs of shape (N,), or (B, N) for batches
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> expected_payoff(stag_hunt(-6), [[0, 0], [0, 0]]).tolist()
        [-0.5, -0.5]
    """
    single, probabilities, values = _batched(game, policies)
    expected = numpy.stack([(p * u).sum(axis=-1) for p, u in zip(probabilities, values)], axis=-1)
    return expected[0] if single else expected


def exact_gradient(game: NormalFormGame, policies: Sequence) -> List[numpy.ndarray]:
    """
    API to compute the gradient of each player's expected payoff with respect to its own logits.

    With softmax probabilities π and action values U the gradient is π_j (U_j - Σ_k π_k U_k), the
    replicator form, so each player's entries sum to zero.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> [g.tolist() for g in exact_gradient(stag_hunt(-6), [[0, 0], [0, 0]])]
        [[-0.75, 0.75], [-0.75, 0.75]]
    """
    single, probabilities, values = _batched(game, policies)
    gradients = []
    for p, u in zip(probabilities, values):
        expected = (p * u).sum(axis=-1, keepdims=True)
        gradient = p * (u - expected)
        gradients.append(gradient[0] if single else gradient)
    return gradients


def state_size(game: NormalFormGame) -> int:
    return int(sum(game.action_counts))


def split_state(game: NormalFormGame, z) -> List[numpy.ndarray]:
    """
    API to split stacked system states of shape (..., Σ|S_i|) into one logit block per player.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> [x.tolist() for x in split_state(stag_hunt(-6), [1, 2, 3, 4])]
        [[1.0, 2.0], [3.0, 4.0]]
    """
    z = numpy.asarray(z, dtype=float)
    if z.shape[-1] != state_size(game):
        raise GameInputError(f'state has {z.shape[-1]} entries, the game needs {state_size(game)}')
    bounds = numpy.cumsum(game.action_counts)[:-1]
    return numpy.split(z, bounds, axis=-1)


def flow_field(game: NormalFormGame, z) -> numpy.ndarray:
    """
    API to evaluate the learning dynamics: every player ascends the exact gradient of its own expected payoff.
    Returns dz of the same shape as z.
    """
    return numpy.concatenate(exact_gradient(game, split_state(game, z)), axis=-1)
