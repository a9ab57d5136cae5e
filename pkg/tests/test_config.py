import pytest

from fracschrod.config import ConfigError, RunConfig, load_config, parse_list, parse_number


def write(tmp_path, text):
    p = tmp_path / "c.ini"
    p.write_text(text)
    return p


def test_parse_number():
    assert parse_number("1/20") == 0.05
    assert parse_number(" 1e-10 ") == 1e-10
    assert parse_list("1/16, 1/32;0.5") == [0.0625, 0.03125, 0.5]
    with pytest.raises(ConfigError):
        parse_number("abc")
    with pytest.raises(ConfigError):
        parse_number("1/0")


def test_defaults_per_command():
    cfg = load_config()
    e = cfg.resolve("energy")
    assert (e.problem, e.h, e.tau, e.T, e.domain) == ("example2", 0.05, 0.05, 5.0, (-5, 5, -5, 5))
    assert cfg.sweep_alphas("energy") == (1.2, 1.5, 1.8)
    assert cfg.sweep_alphas("converge") == (1.2, 1.5, 1.9, 2.0)
    r = cfg.resolve("run")
    assert r.grid().Mx == 160 and r.grid().N == 64
    assert cfg.resolve("converge").domain == (0, 2, 0, 2)


def test_full_file(tmp_path):
    p = write(tmp_path, """
[problem]
name = custom
alpha = 1.7
a = -1
b = 1
c = -1
d = 1
mx = 8
my = 10
tau = 1/10
T = 1
initial = gaussian
width = 0.2

[solver]
tol = 1e-9
preconditioner = off   ; maps to none
dense_cap = 100
method = fft

[output]
dir = results
snapshot_times = 0, 0.5

[sweep]
level_convention = meshsize

[run]
seed = 42
""")
    cfg = load_config(p).resolve("run")
    g = cfg.grid()
    assert (g.Mx, g.My, g.alpha, g.N) == (8, 10, 1.7, 10)
    assert cfg.solver.tol == 1e-9 and cfg.solver.preconditioner == "none"
    assert cfg.solver.dense_cap == 100 and cfg.method == "fft"
    assert cfg.snapshot_times == (0.0, 0.5) and cfg.seed == 42 and cfg.out_dir == "results"


def test_overrides(tmp_path):
    cfg = load_config(write(tmp_path, "[solver]\ntol = 1e-6\n"), alphas="1.3,1.4", levels="1/8,1/16",
                      tol="1e-11", out="o", threads=2, seed=3)
    assert cfg.alpha == 1.3 and cfg.alphas == (1.3, 1.4)
    assert cfg.levels == (0.125, 0.0625) and cfg.solver.tol == 1e-11
    assert (cfg.out_dir, cfg.threads, cfg.seed) == ("o", 2, 3)


@pytest.mark.parametrize("text,match", [
    ("[bogus]\nx = 1\n", "section"),
    ("[problem]\nzeta = 1\n", "keys"),
    ("[problem]\nname = example3\n", "problem"),
    ("[problem]\nalpha = 2.5\n", "alpha"),
    ("[problem]\nname = example1\na = 1\n", "domain"),
    ("[solver]\npreconditioner = jacobi\n", "preconditioner"),
    ("[solver]\nmax_iter = many\n", "many"),
    ("[sweep]\nlevel_convention = odd\n", "level_convention"),
    ("not an ini", "cannot read"),
])
def test_invalid(tmp_path, text, match):
    with pytest.raises(ConfigError, match=match):
        load_config(write(tmp_path, text))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "nope.ini")


def test_grid_errors():
    with pytest.raises(ConfigError, match="multiple"):
        RunConfig(problem="example2", h=0.5, tau=0.3, T=1.0).resolve("run").grid()
    with pytest.raises(ConfigError, match="mx"):
        RunConfig(problem="custom", mx=8, tau=0.1, T=1.0).resolve("run").grid()
    with pytest.raises(ConfigError, match="1/integer"):
        RunConfig().resolve("converge").level_grid(1.5, 0.3)


def test_level_conventions():
    cfg = RunConfig().resolve("converge")
    g = cfg.level_grid(1.5, 1 / 32)
    assert (g.Mx, g.tau, g.hx) == (32, 1 / 32, 1 / 16)
    from dataclasses import replace
    g = replace(cfg, level_convention="meshsize").level_grid(1.5, 1 / 32)
    assert (g.Mx, g.tau, g.hx) == (64, 1 / 32, 1 / 32)
