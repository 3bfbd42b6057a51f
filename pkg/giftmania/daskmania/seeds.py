from typing import Optional

import numpy

# gift sizes and risks are told apart at this resolution when deriving seed keys
_GIFT_RESOLUTION = 10 ** 6


def arm_key(gift: Optional[float]) -> int:
    """
    API to map a gifting arm to the integer used in seed derivation. Training without gifts and gifting
    with gamma = 0 share key 0, so both arms see the same random streams.

    Examples:
        >>> arm_key(None), arm_key(0.0), arm_key(10)
        (0, 0, 10000001)
    """
    if gift is None or gift == 0:
        return 0
    return 1 + int(round(gift * _GIFT_RESOLUTION))


def risk_key(r: Optional[float]) -> int:
    """
    API to map the reward for hunting alone of a risk sweep cell to a nonnegative integer. Environments at
    their own risk get key 0; positive and negative risks interleave on the odd and even keys.

    Examples:
        >>> risk_key(None), risk_key(0.0), risk_key(-2), risk_key(2)
        (0, 1, 4000000, 4000001)
    """
    if r is None:
        return 0
    scaled = int(round(r * _GIFT_RESOLUTION))
    return 1 + (2 * scaled if scaled >= 0 else -2 * scaled - 1)


def run_seed(study_seed: int, environment_index: int, gift: Optional[float], run: int,
             r: Optional[float] = None) -> numpy.random.SeedSequence:
    """
    API to derive the seed of one training run from the study seed, the environment, the arm, the run index
    and, in risk sweeps, the risk of the cell. Streams of different runs are independent whatever order the
    runs execute in.

    Examples:
        >>> a = run_seed(0, 4, None, 7).generate_state(2).tolist()
        >>> a == run_seed(0, 4, 0.0, 7).generate_state(2).tolist()
        True
        >>> a == run_seed(0, 4, 10.0, 7).generate_state(2).tolist()
        False
        >>> run_seed(0, 4, 5.0, 7, -2.0).generate_state(2).tolist() == \\
        ...     run_seed(0, 4, 5.0, 7, -6.0).generate_state(2).tolist()
        False
    """
    return numpy.random.SeedSequence(study_seed,
                                     spawn_key=(environment_index, arm_key(gift), run, risk_key(r)))
