// End-to-end checks of the command-line driver: exit-code contract,
// CSV shape and determinism.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
    const std::string out_path = "cli_test_stdout.txt";
    const std::string cmd =
        env + (env.empty() ? "" : " ") + ORLAB_BIN + " " + args + " > " + out_path + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("norm subcommand") {
    SECTION("lions family emits one CSV row") {
        const auto r = run("norm --family lions --alpha 50");
        REQUIRE(r.exit_code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 2);
        CHECK(ls[0] == "family,param,l2,grad_l2,orlicz");
        // orlicz column sits near 0.284 at alpha = 50
        const auto last_comma = ls[1].rfind(',');
        const double orlicz = std::stod(ls[1].substr(last_comma + 1));
        CHECK(orlicz > 0.28);
        CHECK(orlicz < 0.30);
    }
    SECTION("invalid alpha is a usage error") {
        CHECK(run("norm --family lions --alpha -1").exit_code == 2);
    }
    SECTION("unknown family is a usage error") {
        CHECK(run("norm --family nope --alpha 2").exit_code == 2);
    }
    SECTION("byte-identical output on repeated invocation") {
        const auto a = run("norm --family sum --a 1 --b 2 --alpha 4 --ds 0.005");
        const auto b = run("norm --family sum --a 1 --b 2 --alpha 4 --ds 0.005");
        CHECK(a.exit_code == 0);
        CHECK(a.out == b.out);
    }
    SECTION("scaled and bubble families work") {
        CHECK(run("norm --family scaled --alpha 10 --r-alpha 3 --ds 0.005").exit_code == 0);
        CHECK(run("norm --family bubble --alpha 10 --profile gk --ds 0.005").exit_code == 0);
    }
    SECTION("ORLAB_OUTDIR redirects relative outputs") {
        const auto r = run("norm --family lions --alpha 5 --output out_env.csv",
                           "ORLAB_OUTDIR=cli_envdir");
        REQUIRE(r.exit_code == 0);
        std::ifstream f("cli_envdir/out_env.csv");
        CHECK(f.good());
    }
    SECTION("file family round-trips a saved radial function") {
        {
            std::ofstream f("cli_radial.csv", std::ios::binary);
            f << "s,v\n";
            const int n = 101;
            for (int i = 0; i < n; ++i) {
                const double s = -1.0 + 11.0 * i / (n - 1);
                f << s << "," << (s <= 0.0 ? 0.0 : std::min(s, 1.0)) << "\n";
            }
        }
        const auto r = run("norm --family file --input cli_radial.csv");
        REQUIRE(r.exit_code == 0);
        CHECK(lines(r.out).size() == 2);
    }
}

TEST_CASE("sweep subcommand") {
    SECTION("tail integrals approach their limits") {
        const auto r = run("sweep --probe tail-integrals --alphas 25,50,100 --assert");
        REQUIRE(r.exit_code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 7); // header + I and J rows per alpha
        CHECK(ls[0] == "parameter,observed,target,converged");
    }
    SECTION("empty beta list for moser is a usage error") {
        CHECK(run("sweep --probe moser --alpha-exp 12.566").exit_code == 2);
    }
    SECTION("unknown probe is a usage error") {
        CHECK(run("sweep --probe bogus --alphas 1,2").exit_code == 2);
    }
    SECTION("moser sweep at the critical exponent diverges") {
        const auto r = run("sweep --probe moser --alpha-exp 12.566 --betas 5,10,20 --assert");
        CHECK(r.exit_code == 0);
        CHECK(lines(r.out).size() == 4);
    }
    SECTION("jobs flag keeps output deterministic") {
        const auto a = run("sweep --probe tail-integrals --alphas 10,20,30,40");
        const auto b = run("sweep --probe tail-integrals --alphas 10,20,30,40 --jobs 4");
        CHECK(a.out == b.out);
    }
    SECTION("pq and cross-scale probes run") {
        CHECK(run("sweep --probe pq --p 1 --q 1 --alphas 10,15,20 --assert").exit_code == 0);
        CHECK(run("sweep --probe cross-scale --exp-a 1 --exp-b 2 --alphas 10,100,1000 --assert")
                  .exit_code == 0);
    }
    SECTION("failed convergence assertion exits 3") {
        // proportional scales keep a fixed overlap, so the trend never converges
        CHECK(run("sweep --probe cross-scale --exp-a 1 --exp-b 1 --alphas 10,20,40 --assert")
                  .exit_code == 3);
    }
}

TEST_CASE("decompose subcommand") {
    SECTION("single bubble yields one level and a profile file") {
        const auto r = run("decompose --seq single --nmax 36 --out-dir cli_dec");
        REQUIRE(r.exit_code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() == 2);
        CHECK(ls[0] == "level,scale_at_ref,profile_grad_norm,remainder_orlicz,stability_defect,merged");
        std::ifstream prof("cli_dec/profile_1.csv");
        CHECK(prof.good());
    }
    SECTION("unknown sequence is a usage error") {
        CHECK(run("decompose --seq waves --nmax 30").exit_code == 2);
    }
}

TEST_CASE("wave subcommand") {
    SECTION("propagation precondition violations are usage errors") {
        CHECK(run("wave --T 100 --R 10 --nr 513").exit_code == 2);
    }
    SECTION("supercritical data exits with the blow-up code") {
        CHECK(run("wave --data lions --c 5 --alpha 8 --T 0.5 --R 2.5 --nr 513").exit_code == 4);
    }
    SECTION("subcritical run emits the regime line and snapshots") {
        const auto r = run("wave --data lions --c 0.3 --alpha 8 --T 0.25 --R 2.5 --nr 1025 "
                           "--snapshots 4");
        REQUIRE(r.exit_code == 0);
        const auto ls = lines(r.out);
        REQUIRE(ls.size() >= 4);
        CHECK(ls[0].rfind("# regime=subcritical", 0) == 0);
        CHECK(ls[1] == "t,E_total,E_c_gap,orlicz_snapshot");
    }
    SECTION("field dump writes (time,node,u,ut) rows") {
        const auto r = run("wave --data lions --c 0.2 --alpha 4 --T 0.1 --R 2.5 --nr 257 "
                           "--snapshots 2 --dump-fields cli_fields.csv");
        REQUIRE(r.exit_code == 0);
        std::ifstream f("cli_fields.csv");
        REQUIRE(f.good());
        std::string header;
        std::getline(f, header);
        CHECK(header == "time,node,u,ut");
    }
}

TEST_CASE("verify subcommand") {
    SECTION("a green criterion reports PASS and exits 0") {
        const auto r = run("verify --only closed-forms");
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("[PASS] closed-forms") != std::string::npos);
    }
    SECTION("unknown criterion name is a usage error") {
        CHECK(run("verify --only no-such-criterion").exit_code == 2);
    }
}

TEST_CASE("config file feeds defaults") {
    {
        std::ofstream cfg("cli_cfg.ini", std::ios::binary);
        cfg << "# flat key=value configuration\n";
        cfg << "norm.family=lions\n";
        cfg << "norm.alpha=50\n";
    }
    const auto from_cfg = run("norm --config cli_cfg.ini");
    const auto from_flags = run("norm --family lions --alpha 50");
    REQUIRE(from_cfg.exit_code == 0);
    CHECK(from_cfg.out == from_flags.out);
    SECTION("flags override the file") {
        const auto overridden = run("norm --config cli_cfg.ini --alpha 20");
        const auto direct = run("norm --family lions --alpha 20");
        CHECK(overridden.out == direct.out);
    }
    SECTION("unknown keys are rejected") {
        {
            std::ofstream cfg("cli_cfg_bad.ini", std::ios::binary);
            cfg << "norm.bogus_key=1\n";
        }
        CHECK(run("norm --config cli_cfg_bad.ini").exit_code == 2);
    }
}
