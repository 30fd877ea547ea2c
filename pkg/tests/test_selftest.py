from stiffpress.selftest import selftest


def test_all_builtin_checks_pass():
    results = selftest()
    assert len(results) >= 20
    failed = [f"{r.name}: {r.detail}" for r in results if not r.ok]
    assert not failed, failed
