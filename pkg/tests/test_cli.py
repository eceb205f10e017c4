import io
import subprocess
import sys
import time

import pytest

from regexlen.cli import build_parser, main, run

ABC_STAR = '(re.* (str.to_re "abc"))'
A_OR_B_PLUS = '(re.union (re.+ (str.to_re "a")) (re.+ (str.to_re "b")))'


def cli(tmp_path, text, *flags):
    path = tmp_path / "in.smt2"
    path.write_text(text, encoding="utf-8")
    out, err = io.StringIO(), io.StringIO()
    args = build_parser().parse_args([str(path), *flags])
    code = run(args, out, err)
    return code, out.getvalue(), err.getvalue()


def test_worked_example(tmp_path):
    text = f"(declare-const X String)(assert (str.in_re X {ABC_STAR}))(assert (str.in_re X {A_OR_B_PLUS}))(check-sat)"
    code, out, _ = cli(tmp_path, text)
    assert (code, out) == (0, "unsat\n")


def test_no_asserts_is_sat(tmp_path):
    assert cli(tmp_path, "(check-sat)") == (0, "sat\n", "")


def test_unsupported_term(tmp_path):
    text = '(declare-const X String)(assert (= (str.++ X "a") X))(check-sat)'
    code, out, err = cli(tmp_path, text)
    assert code == 0 and out == "unknown\n"
    assert "unsupported term" in err


def test_model_output(tmp_path):
    text = (f"(declare-const X String)(declare-const n Int)(assert (str.in_re X {ABC_STAR}))"
            "(assert (>= (str.len X) 5))(assert (= n (- 0 (str.len X))))(check-sat)(get-model)")
    code, out, _ = cli(tmp_path, text)
    assert out == 'sat\n(model\n  (define-fun X () String "abcabc")\n  (define-fun n () Int (- 6))\n)\n'


def test_get_model_without_sat(tmp_path):
    text = "(declare-const X String)(assert (< (str.len X) 0))(check-sat)(get-model)"
    _, out, _ = cli(tmp_path, text)
    assert out == 'unsat\n(error "model is not available")\n'


def test_incremental_check_sats(tmp_path):
    text = ("(declare-const X String)(check-sat)(assert (str.in_re X (str.to_re \"a\")))"
            "(assert (> (str.len X) 1))(check-sat)")
    assert cli(tmp_path, text)[1] == "sat\nunsat\n"


def test_stats_on_stderr(tmp_path):
    text = f"(declare-const X String)(assert (str.in_re X {ABC_STAR}))(assert (str.in_re X {A_OR_B_PLUS}))(check-sat)"
    _, out, err = cli(tmp_path, text, "--stats")
    assert out == "unsat\n"
    assert "automata_built=0" in err.splitlines()


def test_heuristic_flags(tmp_path):
    text = f"(declare-const X String)(assert (str.in_re X {ABC_STAR}))(assert (str.in_re X {A_OR_B_PLUS}))(check-sat)"
    _, out, err = cli(tmp_path, text, "--stats", "--no-prefix-suffix", "--no-lazy-intersection",
                      "--no-length-syntax", "--no-length-refine", "--no-arith-integration", "--mode", "eager")
    assert out == "unsat\n"
    assert "automata_built=0" not in err.splitlines()


def test_custom_alphabet(tmp_path):
    text = '(declare-const X String)(assert (not (str.in_re X (re.* (str.to_re "a")))))(check-sat)(get-model)'
    _, out, _ = cli(tmp_path, text, "--alphabet", "custom:ab")
    assert out.splitlines()[2] == '  (define-fun X () String "b")'


def test_dot_export(tmp_path):
    dot = tmp_path / "a.dot"
    text = f"(declare-const X String)(assert (str.in_re X {ABC_STAR}))(check-sat)"
    cli(tmp_path, text, "--dot", str(dot))
    assert dot.read_text().startswith('digraph "X_0"')


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.smt2"
    path.write_text("(assert (str.in_re X", encoding="utf-8")
    assert main([str(path)]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_file():
    assert main(["/nonexistent/input.smt2"]) == 1


@pytest.mark.parametrize("flag", ["--timeout=0", "--max-states=-1", "--alphabet=latin"])
def test_bad_flags(flag):
    with pytest.raises(SystemExit):
        build_parser().parse_args([flag])


def _hard_script():
    sigma = '(re.union (str.to_re "a") (str.to_re "b"))'
    big = f'(re.comp (re.++ (re.* {sigma}) (str.to_re "a") ' + " ".join([sigma] * 18) + "))"
    return f'(declare-const X String)(assert (str.in_re X {big}))(assert (str.in_re X (re.* (str.to_re "a"))))(check-sat)\n'


def test_timeout_honored(tmp_path):
    t0 = time.monotonic()
    code, out, _ = cli(tmp_path, _hard_script(), "--timeout", "1", "--alphabet", "custom:ab")
    elapsed = time.monotonic() - t0
    assert out == "unknown\n" and code == 0
    assert elapsed < 2.0


def test_output_deterministic_across_processes(tmp_path):
    path = tmp_path / "det.smt2"
    path.write_text(
        "(declare-const X String)(declare-const Y String)"
        f"(assert (str.in_re X {ABC_STAR}))(assert (not (str.in_re Y {A_OR_B_PLUS})))"
        "(assert (= (str.len Y) (+ (str.len X) 1)))(assert (> (str.len X) 2))(check-sat)(get-model)")
    cmd = [sys.executable, "-m", "regexlen.cli", str(path)]
    outs = {subprocess.run(cmd, capture_output=True, text=True, check=True).stdout for _ in range(3)}
    assert len(outs) == 1
    assert outs.pop().startswith("sat\n(model\n")
