"""End-to-end checks of the effopen command line: exit codes, outputs and seed handling."""

import csv
import io
import os
import subprocess
import sys
import tempfile


def run(cli, *args, env=None):
    full_env = dict(os.environ)
    full_env.pop("EFFOPEN_SEED", None)
    full_env.update(env or {})
    return subprocess.run([cli, *args], capture_output=True, text=True, env=full_env)


def main():
    cli, specs = sys.argv[1], sys.argv[2]
    failures = []

    def expect(name, cond, extra=""):
        print(("ok   " if cond else "FAIL ") + name + (f" ({extra})" if extra and not cond else ""))
        if not cond:
            failures.append(name)

    spec = lambda name: os.path.join(specs, name)

    r = run(cli, "report", spec("effective_p_z3.json"))
    expect("report exits 0 on a passing task", r.returncode == 0, r.stderr)
    r = run(cli, "report", spec("bad_rational.json"))
    expect("malformed rational exits 2", r.returncode == 2, str(r.returncode))
    expect("diagnostic names the field", "weight[0]" in r.stderr, r.stderr)
    r = run(cli, "report", spec("divergent_c1.json"))
    expect("divergent C1 exits 3", r.returncode == 3, str(r.returncode))
    expect("diagnostic names the gate", "jumping_number" in r.stderr, r.stderr)
    r = run(cli, "report", spec("missing.json"))
    expect("missing spec file exits 2", r.returncode == 2, str(r.returncode))
    r = run(cli, "sweep", spec("dk_unit.json"), "--param", "q", "--range", "0:1:1")
    expect("unknown sweep parameter exits 2", r.returncode == 2, str(r.returncode))
    r = run(cli, "verify", "--suite", "medium")
    expect("unknown suite exits 2", r.returncode == 2, str(r.returncode))

    with tempfile.TemporaryDirectory() as tmp:
        out = os.path.join(tmp, "sweep.csv")
        r = run(cli, "sweep", spec("effective_p_z3.json"), "--param", "m", "--range", "1:20:1", "-o", out)
        expect("sweep exits 0", r.returncode == 0, r.stderr)
        with open(out, newline="") as fh:
            rows = list(csv.DictReader(fh))
        p = [float(row["p_effective"]) for row in rows]
        expect("sweep writes 20 rows", len(rows) == 20)
        expect("p_effective strictly decreasing", all(b < a for a, b in zip(p, p[1:])))

    r = run(cli, "sweep", spec("dk_unit.json"), "--param", "R", "--range", "0:20:1")
    values = {row["value"] for row in csv.DictReader(io.StringIO(r.stdout))}
    expect("dk R sweep is constant pi", values == {"3.1415926535897931"}, str(values))

    r = run(cli, "verify", "--suite", "fast")
    expect("fast suite exits 0", r.returncode == 0, r.stdout)
    expect("fast suite skips Monte Carlo", "SKIP 11" in r.stdout)

    first = run(cli, "verify", "--suite", "full", "--seed", "99")
    second = run(cli, "verify", "--suite", "full", "--seed", "99")
    expect("full suite exits 0", first.returncode == 0, first.stdout)
    expect("full suite output is identical for a fixed seed", first.stdout == second.stdout)
    from_env = run(cli, "verify", "--suite", "full", env={"EFFOPEN_SEED": "99"})
    expect("EFFOPEN_SEED supplies the default seed", from_env.stdout == first.stdout)
    overridden = run(cli, "verify", "--suite", "full", "--seed", "99", env={"EFFOPEN_SEED": "5"})
    expect("--seed overrides EFFOPEN_SEED", overridden.stdout == first.stdout)

    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
