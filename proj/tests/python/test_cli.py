"""End-to-end checks of the command-line interface and its exit codes."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("POVMKIT_CLI")

pytestmark = pytest.mark.skipif(CLI is None, reason="POVMKIT_CLI not set")


def run(*args, **kwargs):
    return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)


def matrix(rows):
    return [[z.real, z.imag] for row in rows for z in row]


def sigma_z_doc():
    return {
        "dim": 2,
        "outcomes": ["+", "-"],
        "effects": [matrix([[1, 0], [0, 0]]), matrix([[0, 0], [0, 1]])],
        "sharp": True,
    }


def noisy_doc(eta):
    hi, lo = (1 + eta) / 2, (1 - eta) / 2
    return {
        "dim": 2,
        "outcomes": ["+", "-"],
        "effects": [matrix([[hi, 0], [0, lo]]), matrix([[lo, 0], [0, hi]])],
    }


@pytest.fixture
def docs(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)

    return write


def test_validate_good_and_bad(docs):
    good = docs("z.json", sigma_z_doc())
    assert run("validate", "--observable", good).returncode == 0

    broken = sigma_z_doc()
    broken["effects"][0] = matrix([[0.9, 0], [0, 0]])
    bad = docs("bad.json", broken)
    proc = run("validate", "--observable", bad)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["valid"] is False


def test_input_errors_exit_2(docs):
    assert run("validate", "--observable", "missing.json").returncode == 2
    assert run("no-such-command").returncode == 2

    not_sharp = docs("noisy.json", noisy_doc(0.5))
    z = docs("z.json", sigma_z_doc())
    # contains-range demands a sharp first argument.
    assert run("contains-range", "--sharp", not_sharp, "--observable", z).returncode == 2


def test_smear_and_find_kernel_roundtrip(docs, tmp_path):
    z = docs("z.json", sigma_z_doc())
    kernel = docs(
        "k.json",
        {
            "source": ["+", "-"],
            "target": ["+", "-"],
            "weights": [[0.75, 0.25], [0.25, 0.75]],
        },
    )
    out = str(tmp_path / "noisy.json")
    proc = run("smear", "--observable", z, "--kernel", kernel, "--out", out)
    assert proc.returncode == 0
    smeared = json.loads(open(out).read())
    assert smeared["effects"][0][0] == [0.75, 0.0]

    proc = run("find-kernel", "--from", z, "--to", out)
    assert proc.returncode == 0
    verdict = json.loads(proc.stdout)
    assert verdict["verdict"] == "feasible"
    assert verdict["kernel"]["weights"][0][0] == pytest.approx(0.75, abs=1e-6)

    # The reverse direction is infeasible: exit code 1.
    proc = run("find-kernel", "--from", out, "--to", z)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "infeasible"


def test_containment_and_equivalence(docs):
    z = docs("z.json", sigma_z_doc())
    noisy = docs("noisy.json", noisy_doc(0.5))

    assert run("contains-range", "--sharp", z, "--observable", z).returncode == 0
    assert run("contains-range", "--sharp", z, "--observable", noisy).returncode == 1
    assert run("oracle-contains", "--sharp", z, "--observable", noisy).returncode == 1

    proc = run("equivalence-suite", "--sharp", z, "--observable", noisy)
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["verdict"] == "infeasible"


def test_sharp_parent_verdicts(docs):
    noisy = docs("noisy.json", noisy_doc(0.5))
    proc = run("sharp-parent", "--observable", noisy)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "commutative"

    # The trine measurement has a non-commutative range: verdict exit 1.
    third = 1.0 / 3.0
    trine = docs(
        "trine.json",
        {
            "dim": 2,
            "outcomes": ["t0", "t1", "t2"],
            "effects": [
                matrix([[2 * third, 0], [0, 0]]),
                matrix([[third / 2, 0.288675134594813], [0.288675134594813, third / 2 + third]]),
                matrix([[third / 2, -0.288675134594813], [-0.288675134594813, third / 2 + third]]),
            ],
        },
    )
    proc = run("sharp-parent", "--observable", trine)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["verdict"] == "non-commutative"


def test_clean_finer_extremal(docs):
    z = docs("z.json", sigma_z_doc())
    assert run("clean", "--sharp", z).returncode == 0
    assert run("finer", "--sharp", z).returncode == 1
    assert run("extremal", "--observable", z).returncode == 0

    noisy = docs("noisy.json", noisy_doc(0.5))
    assert run("extremal", "--observable", noisy).returncode == 1

    blocks = docs(
        "blocks.json",
        {
            "dim": 3,
            "outcomes": ["p", "q"],
            "effects": [
                matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
                matrix([[0, 0, 0], [0, 0, 0], [0, 0, 1]]),
            ],
            "sharp": True,
        },
    )
    assert run("clean", "--sharp", blocks).returncode == 1
    proc = run("finer", "--sharp", blocks)
    assert proc.returncode == 0
    witness = json.loads(proc.stdout)["witness"]
    assert len(witness["outcomes"]) == 3


def test_perturb_reports_the_analytic_defect(docs):
    z = docs("z.json", sigma_z_doc())
    kernel = docs(
        "k.json",
        {
            "source": ["+", "-"],
            "target": ["+", "-"],
            "weights": [[0.75, 0.25], [0.25, 0.75]],
        },
    )
    proc = run("perturb", "--observable", z, "--kernel", kernel, "--b1", "+")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["defect"] == pytest.approx(0.375, abs=1e-12)


def test_random_is_seeded_and_deterministic():
    first = run("random", "povm", "--dim", "3", "--outcomes", "4", "--seed", "99")
    second = run("random", "povm", "--dim", "3", "--outcomes", "4", "--seed", "99")
    assert first.returncode == 0
    assert first.stdout == second.stdout

    third = run("random", "povm", "--dim", "3", "--outcomes", "4", "--seed", "100")
    assert third.stdout != first.stdout

    # --seed is mandatory for generation.
    assert run("random", "povm", "--dim", "3", "--outcomes", "4").returncode == 2


def test_acceptance_single_suite():
    proc = run("acceptance", "--suite", "noisy-qubit")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["passed"] is True

    assert run("acceptance", "--suite", "nonexistent").returncode == 2


def test_dump_lp(docs, tmp_path):
    z = docs("z.json", sigma_z_doc())
    noisy = docs("noisy.json", noisy_doc(0.5))
    lp_path = str(tmp_path / "problem.json")
    proc = run("find-kernel", "--from", z, "--to", noisy, "--dump-lp", lp_path)
    assert proc.returncode == 0
    problem = json.loads(open(lp_path).read())
    assert problem["num_vars"] == 4
    assert len(problem["equalities"]) == 10
