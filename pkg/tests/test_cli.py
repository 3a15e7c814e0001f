import io

import pytest

from rectcover.cli import run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def files(tmp_path):
    def gen(name, *params):
        path = tmp_path / name
        code, _ = call("gen", *params, "-o", str(path))
        assert code == 0
        return str(path)

    return gen


def test_exact_cover_of_t4(files):
    t4 = files("t4.bm", "triangular", "4")
    assert call("cover", "--method", "exact", t4) == (0, "cost 8\n")
    assert call("cover", "--method", "lp", t4) == (0, "value 8\n")
    assert call("cover", "--unweighted", t4) == (0, "rectangles 3\n")


def test_cover_output_verifies(files, tmp_path):
    b = files("b.bm", "kron", files("k.bm", "allones", "1", "1"), files("j.bm", "allones", "2", "2"))
    cov = str(tmp_path / "b.cov")
    assert call("cover", b, "-o", cov)[0] == 0
    assert call("verify", "covering", b, cov) == (0, "valid partition, cost 4\n")


def test_certificate(files):
    t8 = files("t8.bm", "triangular", "8")
    dc = files("c8.dc", "certificate", "8")
    assert call("verify", "certificate", t8, dc) == (0, "feasible, value 24\n")


def test_bad_certificate(files, tmp_path):
    t3 = files("t3.bm", "triangular", "3")
    bad = tmp_path / "bad.dc"
    bad.write_text("3 3\n0 1 3/1\n")
    code, text = call("verify", "certificate", t3, str(bad))
    assert code == 1
    assert text.startswith("infeasible, worst slack -1 at R=0 C=1")


def test_budget_exit_code(files):
    k = files("k.bm", "kneser", "5", "2", "1")
    code, text = call("--bb-budget", "50", "cover", k)
    assert code == 2
    assert "not proven optimal" in text


def test_network_verification(files):
    net = files("n19.rn", "net19")
    b = files("b.bm", "kron", files("u.bm", "triangular", "2"), files("j.bm", "allones", "4", "4"))
    code, text = call("verify", "network", net)
    assert code == 0 and "size 19\ndepth 3 3\n" in text
    # T_2 (x) J_4 is only the upper-right block; B has the diagonal blocks too
    code, text = call("verify", "network", net, b)
    assert code == 1 and text.endswith("expresses no\n")


def test_direct_product(files, tmp_path):
    K = tmp_path / "K.bm"
    K.write_text("2 2\n11\n01\n")
    M = files("M.bm", "allones", "4", "4")
    net = files("f.rn", "family", "4")
    code, text = call("verify", "direct-product", str(K), M, net, "--csv", str(tmp_path / "r.csv"))
    assert code == 0
    assert "CHAIN" in text
    assert (tmp_path / "r.csv").read_text().startswith("section")


def test_regex_commands():
    assert call("regex", "length", "--family", "Ln", "4") == (0, "8\n")
    assert call("regex", "emit", "--family", "Ln", "4", "--divide") == (0, "a0 a1 + (a0+a1)(a2+a3) + a2 a3\n")
    assert call("regex", "nfa", "--family", "Ln", "8") == (0, "eps_free 24\neps_upper 36\n")


def test_bounds():
    code, text = call("bounds", "--entropy")
    assert code == 0 and text == "alpha 0.111111115\nvalue 1.169925\n"
    code, text = call("bounds", "--kneser", "4", "2", "1")
    assert "mu_lower_bound 16" in text


def test_table():
    code, text = call("table", "--kmin", "1", "--kmax", "3")
    assert code == 0
    assert text.splitlines()[1:] and text.splitlines()[1].startswith("1,6,")
    code, text = call("table", "--blocks", "3")
    assert text.startswith("k,x,y,ell,gamma")


def test_invalid_input(tmp_path):
    bad = tmp_path / "bad.bm"
    bad.write_text("2 2\n01\n")
    assert call("cover", str(bad))[0] == 1
    assert call("gen", "triangular")[0] == 1
    assert call("nonsense")[0] == 1
