import os
import tempfile
from pathlib import Path
from unittest import TestCase

import yaml

from giftmania.errors import GameInputError
from giftmania.gamemania.coordination import COORDINATION_KINDS, make_coordination_game, stag_hunt
from giftmania.gamemania.document import dump_game_document, game_from_document, game_to_document, \
    load_game_document
from giftmania.gamemania.gifting import NEIGHBOR_SPLIT, GiftSet, extend_with_gifting
from giftmania.gamemania.graph import make_graph_stag_hunt
from giftmania.gamemania.repeated import RepeatedGame


class TestGameDocument(TestCase):
    def setUp(self) -> None:
        self.temp = tempfile.TemporaryDirectory()
        self.path = Path(self.temp.name) / 'game.yaml'

    def tearDown(self) -> None:
        self.temp.cleanup()

    def test_round_trip_constructors(self):
        games = [make_coordination_game(kind) for kind in COORDINATION_KINDS]
        games.append(extend_with_gifting(stag_hunt(-10), GiftSet(((0, 5, 10), (0, 10)))))
        games.append(make_graph_stag_hunt(3, edges=[(0, 1), (1, 2)], r=-2))
        games.append(extend_with_gifting(make_graph_stag_hunt(3, edges=[(0, 1), (1, 2)]), GiftSet.binary(3, 4),
                                         NEIGHBOR_SPLIT))
        for game in games:
            rebuilt = game_from_document(yaml.safe_load(yaml.safe_dump(game_to_document(game))))
            assert rebuilt == game
            assert type(rebuilt) is type(game)

    def test_repeated(self):
        env = RepeatedGame(stag_hunt(-6), horizon=10)
        dump_game_document(env, self.path)
        rebuilt = load_game_document(self.path)
        assert rebuilt.horizon == 10
        assert rebuilt.stage == env.stage

    def test_gifted_document(self):
        doc = game_to_document(extend_with_gifting(stag_hunt(), GiftSet.binary(2, 10)))
        assert doc['kind'] == 'gifted'
        assert doc['gifts'] == [[0.0, 10.0], [0.0, 10.0]]
        assert doc['split'] == 'global'

    def test_unknown_keys(self):
        doc = game_to_document(stag_hunt())
        doc['gift'] = 10
        with self.assertRaises(GameInputError):
            game_from_document(doc)
        with self.assertRaises(GameInputError):
            game_from_document({'kind': 'extensive-form'})

    def test_not_a_document(self):
        self.path.write_text('- 1\n- 2\n')
        with self.assertRaises(GameInputError):
            load_game_document(str(self.path))
        assert os.path.exists(self.path)
