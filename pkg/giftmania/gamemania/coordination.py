from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from giftmania.errors import ConstraintError, GameInputError
from giftmania.gamemania.game import NormalFormGame

PURE_COORDINATION = 'pure-coordination'
BOS = 'bos'
ASSURANCE = 'assurance'
STAG_HUNT = 'stag-hunt'
COORDINATION_KINDS = (PURE_COORDINATION, BOS, ASSURANCE, STAG_HUNT)

LOW_RISK, MEDIUM_RISK, HIGH_RISK = -2.0, -6.0, -10.0


@dataclass(frozen=True)
class CoordinationParams:
    """
    Entries of a 2x2 game: the row player gets a, b, c, d and the column player A, B, C, D for the
    joint actions (1, 1), (1, 2), (2, 1), (2, 2).
    """
    a: float
    b: float
    c: float
    d: float
    A: float
    B: float
    C: float
    D: float

    @classmethod
    def stag_hunt(cls, r: float = MEDIUM_RISK) -> 'CoordinationParams':
        return cls(a=2, b=r, c=1, d=1, A=2, B=1, C=r, D=1)

    @classmethod
    def pure_coordination(cls) -> 'CoordinationParams':
        return cls(a=1, b=0, c=0, d=1, A=1, B=0, C=0, D=1)

    @classmethod
    def bos(cls) -> 'CoordinationParams':
        return cls(a=2, b=0, c=0, d=1, A=1, B=0, C=0, D=2)

    @classmethod
    def assurance(cls) -> 'CoordinationParams':
        return cls(a=2, b=0, c=0, d=1, A=2, B=0, C=0, D=1)

    @classmethod
    def default(cls, kind: str) -> 'CoordinationParams':
        factories = {PURE_COORDINATION: cls.pure_coordination, BOS: cls.bos,
                     ASSURANCE: cls.assurance, STAG_HUNT: cls.stag_hunt}
        if kind not in factories:
            raise GameInputError(f'unknown coordination game kind {kind!r}')
        return factories[kind]()

    @classmethod
    def from_game(cls, game: NormalFormGame) -> 'CoordinationParams':
        if game.action_counts != (2, 2):
            raise GameInputError('coordination parameters only describe 2x2 games')
        (a, b), (c, d) = game.payoffs[0].tolist()
        (A, B), (C, D) = game.payoffs[1].tolist()
        return cls(a=a, b=b, c=c, d=d, A=A, B=B, C=C, D=D)

    @property
    def r(self) -> float:
        return self.b

    def payoff_tensor(self):
        return [[[self.a, self.b], [self.c, self.d]], [[self.A, self.B], [self.C, self.D]]]


Condition = Tuple[str, Callable[[CoordinationParams], bool]]

COORDINATION_CONDITIONS: List[Condition] = [
    ('a > c', lambda p: p.a > p.c),
    ('A > B', lambda p: p.A > p.B),
    ('d > b', lambda p: p.d > p.b),
    ('D > C', lambda p: p.D > p.C),
]

_EQUAL_OFF_DIAGONAL: Condition = ('b = B = c = C', lambda p: p.b == p.B == p.c == p.C)
_ZETA_BELOW: Condition = ('zeta < min(a, A)', lambda p: p.b < min(p.a, p.A))

KIND_CONDITIONS = {
    PURE_COORDINATION: [_EQUAL_OFF_DIAGONAL, ('a = d', lambda p: p.a == p.d), ('A = D', lambda p: p.A == p.D),
                        _ZETA_BELOW],
    BOS: [_EQUAL_OFF_DIAGONAL, ('a > d', lambda p: p.a > p.d), ('A < D', lambda p: p.A < p.D), _ZETA_BELOW],
    ASSURANCE: [_EQUAL_OFF_DIAGONAL, ('a > d', lambda p: p.a > p.d), ('A > D', lambda p: p.A > p.D), _ZETA_BELOW],
    STAG_HUNT: [('a > d', lambda p: p.a > p.d), ('A > D', lambda p: p.A > p.D),
                ('a = A', lambda p: p.a == p.A), ('d = D', lambda p: p.d == p.D), ('c = B', lambda p: p.c == p.B),
                ('C = b = r', lambda p: p.C == p.b), ('a - c < d - r', lambda p: p.a - p.c < p.d - p.b)],
}

_LABELS = {STAG_HUNT: ('Hunt', 'Forage')}


def violated_conditions(kind: str, params: CoordinationParams) -> List[str]:
    """
    API to list the defining inequalities of a coordination game kind that `params` breaks.

    Examples:
        >>> violated_conditions(STAG_HUNT, CoordinationParams.stag_hunt(-6))
        []
        >>> violated_conditions(STAG_HUNT, CoordinationParams.stag_hunt(1.5))
        ['d > b', 'D > C', 'a - c < d - r']
    """
    if kind not in KIND_CONDITIONS:
        raise GameInputError(f'unknown coordination game kind {kind!r}')
    return [name for name, holds in COORDINATION_CONDITIONS + KIND_CONDITIONS[kind] if not holds(params)]


def make_coordination_game(kind: str, params: Optional[CoordinationParams] = None) -> NormalFormGame:
    """
    API to build a validated two-player coordination game.

    Args:
        kind: one of pure-coordination, bos, assurance, stag-hunt
        params: payoff entries; the kind's default matrix when omitted
    Returns:
        2x2 game
    Examples:
        >>> make_coordination_game(ASSURANCE).payoffs.tolist()
        [[[2.0, 0.0], [0.0, 1.0]], [[2.0, 0.0], [0.0, 1.0]]]
        >>> make_coordination_game(STAG_HUNT, CoordinationParams.stag_hunt(3))
        Traceback (most recent call last):
            ...
        giftmania.errors.ConstraintError: stag-hunt parameters violate: d > b, D > C, a - c < d - r
    """
    if params is None:
        params = CoordinationParams.default(kind)
    violated = violated_conditions(kind, params)
    if violated:
        raise ConstraintError(kind, violated)
    labels = [_LABELS.get(kind, ('Action 1', 'Action 2'))] * 2
    return NormalFormGame(params.payoff_tensor(), labels)


def stag_hunt(r: float = MEDIUM_RISK) -> NormalFormGame:
    """
    API to build the Stag Hunt with reward r for hunting alone.

    Examples:
        >>> stag_hunt(-6).payoffs[:, 0, 1].tolist()
        [-6.0, 1.0]
    """
    return make_coordination_game(STAG_HUNT, CoordinationParams.stag_hunt(r))


def classify_coordination_kind(game: NormalFormGame) -> str:
    """
    API to recognise the coordination sub-class of a 2x2 game.

    Returns:
        one of the coordination kinds, `coordination` for other coordination games, `none` otherwise
    Examples:
        >>> classify_coordination_kind(stag_hunt(-10))
        'stag-hunt'
        >>> classify_coordination_kind(make_coordination_game(BOS))
        'bos'
        >>> classify_coordination_kind(NormalFormGame([[[1, -1], [-1, 1]], [[-1, 1], [1, -1]]]))
        'none'
    """
    if game.num_players != 2 or game.action_counts != (2, 2):
        return 'none'
    params = CoordinationParams.from_game(game)
    if any(not holds(params) for _, holds in COORDINATION_CONDITIONS):
        return 'none'
    for kind in (STAG_HUNT, ASSURANCE, BOS, PURE_COORDINATION):
        if not violated_conditions(kind, params):
            return kind
    return 'coordination'


def is_payoff_dominant_first(params: CoordinationParams) -> bool:
    """
    API to check whether (Action 1, Action 1) payoff-dominates (Action 2, Action 2).

    Examples:
        >>> is_payoff_dominant_first(CoordinationParams.stag_hunt())
        True
        >>> is_payoff_dominant_first(CoordinationParams.bos())
        False
    """
    return params.a >= params.d and params.A >= params.D and (params.a > params.d or params.A > params.D)

