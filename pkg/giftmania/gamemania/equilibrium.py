from dataclasses import dataclass, replace
from typing import Iterable, Iterator, NamedTuple, Optional, Tuple

import numpy
import pandas

from giftmania.errors import GameInputError
from giftmania.gamemania.coordination import stag_hunt
from giftmania.gamemania.game import JointAction, NormalFormGame, validate_joint
from giftmania.gamemania.gifting import GLOBAL_SPLIT, GiftSet, extend_with_gifting

# absolute tolerance of the >= comparison in the equilibrium condition
TOLERANCE = 1e-9


@dataclass(frozen=True)
class Equilibrium:
    profile: JointAction
    payoffs: Tuple[float, ...]
    nash_product: Optional[float] = None
    prosocial: bool = False
    payoff_dominant: bool = False
    risk_dominant: bool = False

    @property
    def total_payoff(self) -> float:
        return float(sum(self.payoffs))


@dataclass(frozen=True)
class PneSet:
    game: NormalFormGame
    equilibria: Tuple[Equilibrium, ...]

    @property
    def profiles(self) -> Tuple[JointAction, ...]:
        return tuple(e.profile for e in self.equilibria)

    def find(self, profile: Iterable[int]) -> Optional[Equilibrium]:
        profile = tuple(int(k) for k in profile)
        for e in self.equilibria:
            if e.profile == profile:
                return e
        return None

    def prosocial_profiles(self) -> Tuple[JointAction, ...]:
        return tuple(e.profile for e in self.equilibria if e.prosocial)

    def risk_dominant_profile(self) -> Optional[JointAction]:
        return next((e.profile for e in self.equilibria if e.risk_dominant), None)

    def payoff_dominant_profile(self) -> Optional[JointAction]:
        return next((e.profile for e in self.equilibria if e.payoff_dominant), None)

    def __contains__(self, profile) -> bool:
        return self.find(profile) is not None

    def __len__(self) -> int:
        return len(self.equilibria)

    def __iter__(self) -> Iterator[Equilibrium]:
        return iter(self.equilibria)


def pne_mask(game: NormalFormGame, tolerance: float = TOLERANCE) -> numpy.ndarray:
    """
    API to mark every joint action from which no player gains by a unilateral deviation.

    Returns:
        boolean array of shape `game.action_counts`
    """
    mask = numpy.ones(game.action_counts, dtype=bool)
    for i in range(game.num_players):
        best_response = game.payoffs[i].max(axis=i, keepdims=True)
        mask &= game.payoffs[i] >= best_response - tolerance
    return mask


def _equilibrium(game: NormalFormGame, profile) -> Equilibrium:
    profile = tuple(int(k) for k in profile)
    return Equilibrium(profile, tuple(float(v) for v in game.payoffs[(slice(None),) + profile]))


def enumerate_pne(game: NormalFormGame) -> PneSet:
    """
    API to enumerate the (weak) pure-strategy Nash equilibria of a finite game by brute force.

    Args:
        game: target game
    Returns:
        equilibria in lexicographic profile order, without flags
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> enumerate_pne(stag_hunt(-6)).profiles
        ((0, 0), (1, 1))
        >>> enumerate_pne(NormalFormGame([[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]])).profiles
        ()
        >>> len(enumerate_pne(NormalFormGame(numpy.zeros((2, 2, 2)))))
        4
    """
    return PneSet(game, tuple(_equilibrium(game, p) for p in numpy.argwhere(pne_mask(game))))


def enumerate_pne_by_deviation(game: NormalFormGame) -> PneSet:
    """
    API to enumerate pure equilibria by explicitly trying every unilateral deviation, visiting joint actions and
    deviations in reverse order. Used to cross-check `enumerate_pne`.
    """
    found = []
    for joint in reversed(list(game.joint_actions())):
        stable = True
        for i in reversed(range(game.num_players)):
            current = game.payoffs[(i,) + joint]
            for deviation in reversed(range(game.action_counts[i])):
                deviated = joint[:i] + (deviation,) + joint[i + 1:]
                if game.payoffs[(i,) + deviated] > current + TOLERANCE:
                    stable = False
                    break
            if not stable:
                break
        if stable:
            found.append(joint)
    return PneSet(game, tuple(_equilibrium(game, p) for p in sorted(found)))


def is_strictly_dominated(game: NormalFormGame, player: int, action_a: int, action_b: int) -> bool:
    """
    API to check whether `action_b` strictly dominates `action_a` for `player`.

    Returns:
        True iff action_b pays strictly more than action_a against every opponent profile
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> is_strictly_dominated(stag_hunt(-6), 0, 1, 0)
        False
        >>> is_strictly_dominated(stag_hunt(-6), 0, 0, 0)
        False
    """
    if not (0 <= action_a < game.action_counts[player] and 0 <= action_b < game.action_counts[player]):
        raise GameInputError(f'actions {action_a}, {action_b} do not belong to player {player}')
    payoff = game.payoffs[player]
    return bool((numpy.take(payoff, action_b, axis=player) > numpy.take(payoff, action_a, axis=player)).all())


def _deviation_losses(game: NormalFormGame, profile: JointAction) -> numpy.ndarray:
    losses = []
    for i in range(game.num_players):
        current = game.payoffs[(i,) + profile]
        deviations = [game.payoffs[(i,) + profile[:i] + (k,) + profile[i + 1:]]
                      for k in range(game.action_counts[i]) if k != profile[i]]
        losses.append(min(current - v for v in deviations) if deviations else 1.0)
    return numpy.array(losses)


def nash_product(game: NormalFormGame, profile: Iterable[int]) -> float:
    """
    API to compute the Nash product of an equilibrium of a two-player game.

    A player's deviation loss is its payoff drop under the least costly unilateral deviation, which is the
    single alternative action in 2x2 games.

    Args:
        game: two-player game
        profile: a pure equilibrium of the game
    Returns:
        product of both players' deviation losses
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> nash_product(stag_hunt(-6), (0, 0))
        1.0
        >>> nash_product(stag_hunt(-6), (1, 1))
        49.0
        >>> nash_product(stag_hunt(-10), (1, 1))
        121.0
        >>> nash_product(stag_hunt(-6), (0, 1))
        Traceback (most recent call last):
            ...
        giftmania.errors.GameInputError: (0, 1) is not a pure equilibrium
    """
    if game.num_players != 2:
        raise GameInputError('the Nash product is only defined for two-player games')
    profile = validate_joint(game, tuple(profile))
    if not pne_mask(game)[profile]:
        raise GameInputError(f'{profile} is not a pure equilibrium')
    return float(numpy.prod(_deviation_losses(game, profile)))


def _dominates(p: Equilibrium, q: Equilibrium) -> bool:
    diff = numpy.subtract(p.payoffs, q.payoffs)
    return bool((diff >= -TOLERANCE).all() and (diff > TOLERANCE).any())


def classify_equilibria(game: NormalFormGame) -> PneSet:
    """
    API to enumerate pure equilibria and flag the prosocial, payoff-dominant and risk-dominant ones.

    Prosocial equilibria maximise the total payoff (ties are all prosocial). A payoff-dominant equilibrium is
    weakly better for every player than every other equilibrium and strictly better for one. Risk dominance,
    a strictly larger Nash product than every other equilibrium, is only computed for two-player games.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> pne = classify_equilibria(stag_hunt(-6))
        >>> pne.prosocial_profiles(), pne.payoff_dominant_profile(), pne.risk_dominant_profile()
        (((0, 0),), (0, 0), (1, 1))
    """
    pne = enumerate_pne(game)
    equilibria = list(pne.equilibria)
    if not equilibria:
        return pne

    if game.num_players == 2:
        equilibria = [replace(e, nash_product=nash_product(game, e.profile)) for e in equilibria]

    best_total = max(e.total_payoff for e in equilibria)
    flagged = []
    for e in equilibria:
        others = [q for q in equilibria if q is not e]
        risk_dominant = e.nash_product is not None and \
            all(e.nash_product > q.nash_product + TOLERANCE for q in others)
        flagged.append(replace(e,
                               prosocial=e.total_payoff >= best_total - TOLERANCE,
                               payoff_dominant=all(_dominates(e, q) for q in others),
                               risk_dominant=risk_dominant))
    return PneSet(game, tuple(flagged))


class MappingVerdict(NamedTuple):
    holds: bool
    witness: Optional[JointAction]


def verify_gift_pne_mapping(game: NormalFormGame, gifts: GiftSet, split: str = GLOBAL_SPLIT) -> MappingVerdict:
    """
    API to check by brute force that the pure equilibria of the gifted game are exactly the equilibria of the
    base game with zero gifts appended.

    Returns:
        verdict and, on failure, the first profile found in only one of the two sets
    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> verify_gift_pne_mapping(stag_hunt(-6), GiftSet.binary(2, 10))
        MappingVerdict(holds=True, witness=None)
    """
    gifted = extend_with_gifting(game, gifts, split)
    expected = {gifted.zero_gift_profile(p) for p in enumerate_pne(game).profiles}
    found = set(enumerate_pne(gifted).profiles)
    mismatched = sorted(expected ^ found)
    if mismatched:
        return MappingVerdict(False, mismatched[0])
    return MappingVerdict(True, None)


def pne_report(pne: PneSet) -> pandas.DataFrame:
    """
    API to convert an equilibrium set into a report table, one row per equilibrium.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> report = pne_report(classify_equilibria(stag_hunt(-6)))
        >>> report[['labels', 'total_payoff', 'nash_product', 'prosocial', 'risk_dominant']]
        ... # doctest: +NORMALIZE_WHITESPACE
                     labels  total_payoff  nash_product  prosocial  risk_dominant
        0       Hunt, Hunt           4.0           1.0       True          False
        1   Forage, Forage           2.0          49.0      False           True
    """
    game = pne.game
    rows = []
    for e in pne.equilibria:
        row = {'profile': ' '.join(str(k) for k in e.profile),
               'labels': ', '.join(game.label_of(e.profile))}
        row.update({f'payoff_{i}': v for i, v in enumerate(e.payoffs)})
        row.update({'total_payoff': e.total_payoff,
                    'nash_product': numpy.nan if e.nash_product is None else e.nash_product,
                    'prosocial': e.prosocial,
                    'payoff_dominant': e.payoff_dominant,
                    'risk_dominant': e.risk_dominant})
        rows.append(row)
    columns = ['profile', 'labels'] + [f'payoff_{i}' for i in range(game.num_players)] + \
              ['total_payoff', 'nash_product', 'prosocial', 'payoff_dominant', 'risk_dominant']
    return pandas.DataFrame(rows, columns=columns)


def stag_hunt_risk_curve(r_values: Iterable[float]) -> pandas.DataFrame:
    """
    API to tabulate the Nash products of both Stag Hunt equilibria for several rewards r for hunting alone.

    Examples:
        >>> stag_hunt_risk_curve([-2, -6, -10])
        ... # doctest: +NORMALIZE_WHITESPACE
              r  hunt_nash_product  forage_nash_product
        0  -2.0                1.0                  9.0
        1  -6.0                1.0                 49.0
        2 -10.0                1.0                121.0
    """
    rows = []
    for r in r_values:
        game = stag_hunt(r)
        rows.append({'r': float(r),
                     'hunt_nash_product': nash_product(game, (0, 0)),
                     'forage_nash_product': nash_product(game, (1, 1))})
    return pandas.DataFrame(rows, columns=['r', 'hunt_nash_product', 'forage_nash_product'])


PROSOCIAL = 'prosocial'
RISK_DOMINANT = 'risk_dominant'
OTHER_PNE = 'other_pne'
UNCONVERGED = 'unconverged'
FAILED = 'failed'
OUTCOME_KINDS = (PROSOCIAL, RISK_DOMINANT, OTHER_PNE, UNCONVERGED, FAILED)


def outcome_kind(pne: PneSet, profile: Optional[Iterable[int]]) -> str:
    """
    API to name where a learning process ended: a prosocial equilibrium, the risk-dominant one, another pure
    equilibrium, or nowhere.

    Examples:
        >>> from giftmania.gamemania.coordination import stag_hunt
        >>> pne = classify_equilibria(stag_hunt(-6))
        >>> outcome_kind(pne, (0, 0)), outcome_kind(pne, (1, 1)), outcome_kind(pne, (0, 1)), outcome_kind(pne, None)
        ('prosocial', 'risk_dominant', 'unconverged', 'unconverged')
    """
    if profile is None:
        return UNCONVERGED
    equilibrium = pne.find(profile)
    if equilibrium is None:
        return UNCONVERGED
    if equilibrium.prosocial:
        return PROSOCIAL
    if equilibrium.risk_dominant:
        return RISK_DOMINANT
    return OTHER_PNE
