"""Compare the fixpoint evaluator with the evaluation-game checker and solve encoded parity games."""
import random

from ptmu.formula import classify, render
from ptmu.games import encode_game, game_check, solve, walukiewicz
from ptmu.generators import random_formula, random_game
from ptmu.graph import random_colored_graph
from ptmu.semantics import model_check

rng = random.Random(1)
agree = 0
for _ in range(300):
    g = random_colored_graph(rng.randrange(1 << 30), rng.randint(1, 6), 0.4, ("q", "r"))
    f = random_formula(rng, rng.randint(1, 10), guards=True, colors=True, max_ad=2)
    v = rng.choice(g.vertices)
    agree += game_check(g, v, f) == model_check(g, v, f)
print(f"game checker agrees with direct evaluator on {agree}/300 instances")

for n in range(4):
    w = walukiewicz(n)
    c = classify(w)
    print(f"W_{n}: sigma={c.sigma} pi={c.pi} ad={c.ad}")
print("W_1 =", render(walukiewicz(1)))

wins = 0
for seed in range(100):
    game = random_game(seed, 6, 2)
    expected = game.initial in solve(game).win_d
    assert model_check(encode_game(game, 2), game.initial, walukiewicz(2)) == expected
    wins += expected
print(f"W_2 decides 100 random games correctly (d wins {wins})")
