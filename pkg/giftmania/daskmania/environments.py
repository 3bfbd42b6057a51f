from typing import Optional

from giftmania.errors import GameInputError
from giftmania.gamemania.coordination import ASSURANCE, BOS, HIGH_RISK, LOW_RISK, MEDIUM_RISK, PURE_COORDINATION, \
    make_coordination_game, stag_hunt
from giftmania.gamemania.gifting import GLOBAL_SPLIT, GiftSet, extend_with_gifting
from giftmania.gamemania.graph import make_graph_stag_hunt
from giftmania.gamemania.repeated import RepeatedGame

REPEATED_HORIZON = 10

ENVIRONMENTS = (
    'bos',
    'pure-coordination',
    'assurance',
    'stag-hunt-high',
    'stag-hunt-medium',
    'stag-hunt-low',
    'fc3-stag-hunt',
    'fc4-stag-hunt',
    'repeated-stag-hunt',
)

_RISK = {'stag-hunt-high': HIGH_RISK, 'stag-hunt-medium': MEDIUM_RISK, 'stag-hunt-low': LOW_RISK}


def _stage(name: str, r: Optional[float]):
    if name == 'bos':
        return make_coordination_game(BOS)
    if name == 'pure-coordination':
        return make_coordination_game(PURE_COORDINATION)
    if name == 'assurance':
        return make_coordination_game(ASSURANCE)
    if name in _RISK:
        return stag_hunt(_RISK[name] if r is None else r)
    if name == 'fc3-stag-hunt':
        return make_graph_stag_hunt(3, r=MEDIUM_RISK if r is None else r)
    if name == 'fc4-stag-hunt':
        return make_graph_stag_hunt(4, r=MEDIUM_RISK if r is None else r)
    if name == 'repeated-stag-hunt':
        return stag_hunt(MEDIUM_RISK if r is None else r)
    raise GameInputError(f'unknown environment {name!r}, expected one of {", ".join(ENVIRONMENTS)}')


def make_environment(name: str, gift: Optional[float] = None, split: str = GLOBAL_SPLIT,
                     r: Optional[float] = None) -> RepeatedGame:
    """
    API to build one of the training environments.

    Args:
        name: environment name, see `ENVIRONMENTS`
        gift: gift size gamma; None trains without gifting actions
        split: how gifts are split in graph games
        r: overrides the reward for hunting alone of the Stag Hunt environments
    Returns:
        one-shot environment (horizon 1), or horizon 10 for `repeated-stag-hunt`
    Examples:
        >>> env = make_environment('stag-hunt-high', gift=10)
        >>> env.horizon, env.stage.action_counts, float(env.stage.payoffs[0, 0, 1])
        (1, (4, 4), -10.0)
        >>> make_environment('fc4-stag-hunt').stage.num_players
        4
        >>> make_environment('repeated-stag-hunt').horizon
        10
    """
    stage = _stage(name, r)
    if gift is not None:
        stage = extend_with_gifting(stage, GiftSet.binary(stage.num_players, gift), split)
    horizon = REPEATED_HORIZON if name == 'repeated-stag-hunt' else 1
    return RepeatedGame(stage, horizon)
