from lattice_dehn.reproduce import run_all


def test_reproduction_checks_pass_at_small_size():
    checks = run_all(prec=128, samples=500, big_n=5)
    assert [c.name for c in checks] and all(c.passed for c in checks), [c.line() for c in checks]
