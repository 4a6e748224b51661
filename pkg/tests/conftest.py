import os

from hypothesis import HealthCheck, settings

from fiberflat import PrimeField, PolyRing, QuotientRing

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=300)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F101 = PrimeField(101)


def ring(names, relations=(), order="grevlex", field=F101):
    """``field[names] / (relations)`` given as polynomial strings."""
    P = PolyRing(field, names, order)
    return QuotientRing(P, [P(r) for r in relations])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
