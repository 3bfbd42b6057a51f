import logging
from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy
import pandas

from giftmania.daskmania.util import parallel_map
from giftmania.errors import GameInputError, NumericalError
from giftmania.gamemania.coordination import stag_hunt
from giftmania.gamemania.equilibrium import classify_equilibria
from giftmania.gamemania.game import NormalFormGame
from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
from giftmania.flowmania.flow import FlowConfig, integrate_batch
from giftmania.flowmania.policy import flow_field

logger = logging.getLogger(__name__)

# logits are varied within [-AXIS_LIMIT, AXIS_LIMIT] around the Forage, zero-gift reference logit
AXIS_LIMIT = 3.0
# index of the reference action whose logit stays 0
REFERENCE = 1

CELL_COLUMNS = ['x_diff', 'y_diff', 'samples', 'prosocial_fraction', 'unconverged_fraction', 'failed']


@dataclass
class BasinGrid:
    """
    Prosocial fraction per (x1 - x2, y1 - y2) cell, where x and y are the two players' logits and x2, y2 the
    fixed Forage reference.
    """
    gifted: bool
    resolution: int
    gift_samples: int
    cells: pandas.DataFrame

    def aggregate_prosocial(self) -> float:
        """Mean prosocial fraction over the cells that did not fail."""
        return float(self.cells.loc[~self.cells['failed'], 'prosocial_fraction'].mean())

    def aggregate_unconverged(self) -> float:
        return float(self.cells.loc[~self.cells['failed'], 'unconverged_fraction'].mean())

    def failed_cells(self) -> int:
        return int(self.cells['failed'].sum())

    def fraction_at(self, x_diff: float, y_diff: float) -> float:
        row = self.cells[numpy.isclose(self.cells['x_diff'], x_diff) & numpy.isclose(self.cells['y_diff'], y_diff)]
        if row.empty:
            raise GameInputError(f'({x_diff}, {y_diff}) is not a cell of the grid')
        return float(row['prosocial_fraction'].iloc[0])


def axis_values(count: int) -> numpy.ndarray:
    """
    API to space `count` values uniformly over [-3, 3]; a single sample sits at 0.

    Examples:
        >>> axis_values(5).tolist()
        [-3.0, -1.5, 0.0, 1.5, 3.0]
        >>> axis_values(1).tolist()
        [0.0]
    """
    if count < 1:
        raise GameInputError('at least one value per axis is needed')
    if count == 1:
        return numpy.zeros(1)
    return numpy.linspace(-AXIS_LIMIT, AXIS_LIMIT, count)


def _check_two_by_two(game: NormalFormGame):
    base = game.base_game
    if game.num_players != 2 or base.action_counts != (2, 2):
        raise GameInputError('the learning dynamics are analysed for two-player games with two base actions')


def initial_states(game: NormalFormGame, x_diff: float, y_diff: float, offsets: Sequence[float]) -> numpy.ndarray:
    """
    API to build the system state for one cell and one choice of gift logits.

    Args:
        game: two-player game, gifted or not
        x_diff: logit of player 1's first action relative to the reference
        y_diff: same for player 2
        offsets: logits of the remaining (gift) actions relative to the reference, player 1 first
    Examples:
        >>> from giftmania.gamemania.gifting import GiftSet, extend_with_gifting
        >>> gifted = extend_with_gifting(stag_hunt(-6), GiftSet.binary(2, 10))
        >>> initial_states(gifted, 1.0, 2.0, [3, 4, 5, 6]).tolist()
        [1.0, 0.0, 3.0, 4.0, 2.0, 0.0, 5.0, 6.0]
    """
    extra = [n - 2 for n in game.action_counts]
    if len(offsets) != sum(extra):
        raise GameInputError(f'expected {sum(extra)} gift offsets, got {len(offsets)}')
    x = [x_diff, 0.0] + list(offsets[:extra[0]])
    y = [y_diff, 0.0] + list(offsets[extra[0]:])
    return numpy.array(x + y, dtype=float)


def _gift_offsets(game: NormalFormGame, gift_samples: int) -> List[Tuple[float, ...]]:
    dims = sum(n - 2 for n in game.action_counts)
    return list(product(axis_values(gift_samples), repeat=dims))


def _cell_worker(task):
    game, prosocial, x_diff, y_diff, offsets, config = task
    states = numpy.stack([initial_states(game, x_diff, y_diff, o) for o in offsets])
    try:
        batch = integrate_batch(game, states, config)
    except NumericalError as e:
        logger.warning('cell (%g, %g) failed: %s', x_diff, y_diff, e)
        return {'x_diff': x_diff, 'y_diff': y_diff, 'samples': len(offsets),
                'prosocial_fraction': numpy.nan, 'unconverged_fraction': numpy.nan, 'failed': True}
    hits = sum(batch.profile(row) in prosocial for row in range(len(offsets)))
    return {'x_diff': x_diff, 'y_diff': y_diff, 'samples': len(offsets),
            'prosocial_fraction': hits / len(offsets),
            'unconverged_fraction': float((~batch.converged).mean()),
            'failed': False}


def basin_grid(game: NormalFormGame, resolution: int = 21, gift_samples: int = 5,
               config: Optional[FlowConfig] = None, workers: Optional[int] = None,
               scheduler: Optional[str] = None) -> BasinGrid:
    """
    API to measure the basin of attraction of the prosocial equilibria of one two-player game.

    Each cell integrates the dynamics from every combination of sampled gift logits and records the share of
    starts that commit to a prosocial equilibrium. An ungifted game has a single start per cell.

    Args:
        game: two-player game with two base actions, gifted or not
        resolution: cells per axis
        gift_samples: samples per gift axis
        config: integrator settings
        workers: worker count for the cell map
        scheduler: dask scheduler
    Returns:
        grid of resolution**2 cells
    """
    _check_two_by_two(game)
    if resolution < 2:
        raise GameInputError('resolution must be at least 2')
    config = config or FlowConfig()
    prosocial = set(classify_equilibria(game).prosocial_profiles())
    offsets = _gift_offsets(game, gift_samples)
    axis = axis_values(resolution)
    tasks = [(game, prosocial, float(x), float(y), offsets, config) for x, y in product(axis, axis)]

    gifted = any(n > 2 for n in game.action_counts)
    logger.info('basin sweep: %d cells x %d starts (%s)', len(tasks), len(offsets),
                'gifted' if gifted else 'ungifted')
    cells = pandas.DataFrame(parallel_map(_cell_worker, tasks, workers, scheduler), columns=CELL_COLUMNS)
    grid = BasinGrid(gifted=gifted, resolution=resolution, gift_samples=gift_samples if gifted else 1,
                     cells=cells)
    if grid.failed_cells():
        logger.warning('%d of %d cells failed', grid.failed_cells(), len(cells))
    return grid


def basin_sweep(game: NormalFormGame, gifts: GiftSet, resolution: int = 21, gift_samples: int = 5,
                config: Optional[FlowConfig] = None, workers: Optional[int] = None,
                scheduler: Optional[str] = None) -> Tuple[BasinGrid, BasinGrid]:
    """
    API to measure the prosocial basin of a game with and without gifting.

    Returns:
        (gifted grid, ungifted grid)
    """
    gifted = basin_grid(extend_with_gifting(game, gifts), resolution, gift_samples, config, workers, scheduler)
    ungifted = basin_grid(game, resolution, 1, config, workers, scheduler)
    logger.info('prosocial share: %.4f gifted, %.4f ungifted', gifted.aggregate_prosocial(),
                ungifted.aggregate_prosocial())
    return gifted, ungifted


FREQUENCY_COLUMNS = ['r', 'gamma', 'gifted', 'prosocial_frequency', 'unconverged_frequency', 'failed_cells']


def frequency_sweep(r_values: Iterable[float], gammas: Iterable[float], resolution: int = 11,
                    gift_samples: int = 3, config: Optional[FlowConfig] = None, workers: Optional[int] = None,
                    scheduler: Optional[str] = None) -> pandas.DataFrame:
    """
    API to tabulate the prosocial basin share of the Stag Hunt for every risk r and gift size gamma, plus
    one ungifted baseline row (gifted False, gamma 0) per r.
    """
    gammas = [float(g) for g in gammas]
    rows = []
    for r in r_values:
        game = stag_hunt(r)
        baseline = basin_grid(game, resolution, 1, config, workers, scheduler)
        rows.append({'r': float(r), 'gamma': 0.0, 'gifted': False,
                     'prosocial_frequency': baseline.aggregate_prosocial(),
                     'unconverged_frequency': baseline.aggregate_unconverged(),
                     'failed_cells': baseline.failed_cells()})
        for gamma in gammas:
            grid = basin_grid(extend_with_gifting(game, GiftSet.binary(2, gamma)), resolution, gift_samples,
                              config, workers, scheduler)
            rows.append({'r': float(r), 'gamma': gamma, 'gifted': True,
                         'prosocial_frequency': grid.aggregate_prosocial(),
                         'unconverged_frequency': grid.aggregate_unconverged(),
                         'failed_cells': grid.failed_cells()})
        logger.info('frequency sweep finished r=%g', r)
    return pandas.DataFrame(rows, columns=FREQUENCY_COLUMNS)


PORTRAIT_COLUMNS = ['x_diff', 'y_diff', 'dx', 'dy', 'magnitude', 'stationary']


def phase_portrait(game: NormalFormGame, offsets: Sequence[float] = (), resolution: int = 15) -> pandas.DataFrame:
    """
    API to sample the direction of the learning dynamics in the (x1 - x2, y1 - y2) plane with the gift logits
    held at `offsets`.

    Directions are the rates of change of x1 - x2 and y1 - y2, scaled to unit length; stationary points get
    a zero vector.

    Examples:
        >>> field = phase_portrait(stag_hunt(-6), resolution=3)
        >>> field[['x_diff', 'y_diff']].iloc[-1].tolist()
        [3.0, 3.0]
        >>> bool(field.iloc[-1]['dx'] > 0 and field.iloc[-1]['dy'] > 0)
        True
    """
    _check_two_by_two(game)
    axis = axis_values(resolution)
    points = list(product(axis, axis))
    states = numpy.stack([initial_states(game, x, y, offsets) for x, y in points])
    dz = flow_field(game, states)
    n1 = game.action_counts[0]
    dx = dz[:, 0] - dz[:, REFERENCE]
    dy = dz[:, n1] - dz[:, n1 + REFERENCE]
    magnitude = numpy.hypot(dx, dy)
    stationary = magnitude == 0
    scale = numpy.where(stationary, 1.0, magnitude)
    return pandas.DataFrame({'x_diff': [float(x) for x, _ in points], 'y_diff': [float(y) for _, y in points],
                             'dx': dx / scale, 'dy': dy / scale, 'magnitude': magnitude,
                             'stationary': stationary}, columns=PORTRAIT_COLUMNS)


def portrait_gallery(game: NormalFormGame, offsets_list: Iterable[Sequence[float]],
                     resolution: int = 15) -> pandas.DataFrame:
    """
    API to stack several phase portraits of one game, each labelled with its gift offsets.
    """
    frames = []
    for offsets in offsets_list:
        frame = phase_portrait(game, offsets, resolution)
        frame.insert(0, 'offsets', ' '.join(f'{o:g}' for o in offsets))
        frames.append(frame)
    return pandas.concat(frames, ignore_index=True)
