#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"

using nlohmann::ordered_json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "tempo_bell");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = tempo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

ordered_json invoke_json(std::vector<std::string> args) {
    args.push_back("--format");
    args.push_back("json");
    const Outcome o = invoke(std::move(args));
    REQUIRE(o.code == 0);
    return ordered_json::parse(o.out);
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

int exit_status_of(const std::string& args) {
    const std::string cmd = std::string(TEMPO_BELL_EXE) + " " + args + " >/dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const std::string kTsirelsonQuad = "0,0,0.39269908,0,0.78539816,0,1.17809725,0";
const double kTsirelson = 2 * std::numbers::sqrt2;

}  // namespace

TEST_CASE("chsh subcommand") {
    const Outcome bell = invoke({"chsh", "--state", "bell-phi-plus", "--angles", kTsirelsonQuad});
    CHECK(bell.code == 0);
    CHECK(bell.out.find("S: 2.82842712") != std::string::npos);
    CHECK(bell.out.find("verdict: violates classical bound") != std::string::npos);

    const auto zz = invoke_json({"chsh", "--state", "product-zz", "--angles", kTsirelsonQuad});
    CHECK(std::abs(zz["result"]["S"].get<double>()) <= 2.0);
    CHECK(zz["result"]["verdict"] == "within classical bound");

    // explicit components, un-normalized input is renormalized
    const auto custom = invoke_json({"chsh", "--state", "1,0,0,0,0,0,1,0", "--angles", kTsirelsonQuad});
    CHECK(std::abs(custom["result"]["S"].get<double>() - kTsirelson) < 1e-7);

    CHECK(invoke({"chsh", "--angles", "0,0,0,0,0,0,0"}).code == 2);
    CHECK(invoke({"chsh", "--angles", "0,0,0,0,0,0,0,x"}).code == 2);
    CHECK(invoke({"chsh"}).code == 2);
}

TEST_CASE("tchsh subcommand") {
    const auto init = invoke_json({"tchsh", "--scenario", "initial", "--psi", "z+", "--angles", kTsirelsonQuad});
    CHECK(std::abs(init["result"]["S_temporal"].get<double>() - kTsirelson) < 1e-7);

    const auto prod =
        invoke_json({"tchsh", "--scenario", "product-history", "--t1", "z+", "--t2", "z+", "--angles", kTsirelsonQuad});
    CHECK(std::abs(prod["result"]["S_temporal"].get<double>()) <= 2.0);

    const Outcome ent = invoke({"tchsh", "--scenario", "entangled-history", "--angles", kTsirelsonQuad});
    CHECK(ent.out.find("S_temporal: 2.82842712") != std::string::npos);

    const Outcome null = invoke({"tchsh", "--scenario", "product-history", "--t1", "z+", "--t2", "z-"});
    CHECK(null.code == 3);
    CHECK(null.err.find("null history") != std::string::npos);
    CHECK(invoke({"tchsh", "--scenario", "bogus"}).code == 2);
    CHECK(invoke({"tchsh", "--scenario", "initial", "--psi", "y+"}).code == 2);
}

TEST_CASE("vfunc subcommand") {
    const auto ent = invoke_json({"vfunc", "--scenario", "entangled-history"});
    CHECK(std::abs(ent["result"]["V"].get<double>() - 0.0234375) < 1e-12);
    CHECK(ent["result"]["classification"] == "necessarily entangled (below)");
    CHECK(ent["metadata"]["grid"] == 16);

    const auto init = invoke_json({"vfunc", "--scenario", "initial", "--theta", "0", "--phi", "0"});
    CHECK(std::abs(init["result"]["V"].get<double>() - 0.068359375) < 1e-12);
    CHECK(std::abs(init["result"]["M"].get<double>() - 0.25) < 1e-12);

    const auto prod = invoke_json({"vfunc", "--scenario", "product-history", "--theta", "0.7853982", "--theta-prime",
                                   "0.7853982", "--t-phi", "0", "--t-phi-prime", "0"});
    CHECK(std::abs(prod["result"]["V"].get<double>() - 0.03515625) < 1e-10);
    CHECK(prod["result"]["V_abs_deviation"].get<double>() < 1e-12);

    const auto mc = invoke_json({"vfunc", "--scenario", "initial", "--monte-carlo", "50000", "--seed", "5"});
    CHECK(mc["result"].contains("V_stderr"));
    CHECK(mc["metadata"]["seed"] == 5);

    CHECK(invoke({"vfunc", "--grid", "3"}).code == 2);
}

TEST_CASE("protocol subcommand") {
    const auto a = invoke_json({"protocol", "--t1", "0,0", "--t2", "0,0"});
    CHECK(std::abs(a["result"]["renormalized_probability"].get<double>() - 0.5) < 1e-12);
    CHECK(std::abs(a["result"]["postselection_probability"].get<double>() - 0.25) < 1e-12);
    CHECK(a["result"]["steps"].size() == 6);

    const auto b = invoke_json({"protocol", "--t1", "0,0", "--t2", "0,0", "--perp-t2"});
    CHECK(std::abs(b["result"]["renormalized_probability"].get<double>()) < 1e-12);

    const auto c = invoke_json({"protocol", "--t1", "1.1,0.3", "--t2", "-0.4,2.0", "--perp-t1"});
    CHECK(c["result"]["abs_difference"].get<double>() < 1e-12);
    const auto d = invoke_json({"protocol", "--t1", "1.1,0.3", "--t2", "-0.4,2.0", "--postselect", "phi-"});
    CHECK(d["result"]["abs_difference"].get<double>() < 1e-12);

    CHECK(invoke({"protocol", "--t1", "0"}).code == 2);
}

TEST_CASE("sweep subcommand") {
    const Outcome s = invoke({"sweep", "--scenario", "entangled-history", "--param", "theta2", "--from", "0", "--to",
                              "6.283185307179586", "--steps", "100"});
    REQUIRE(s.code == 0);
    const auto rows = lines(s.out);
    REQUIRE(rows.size() == 101);
    CHECK(rows[0] == "theta2,s-temporal");
    double best = -10, best_x = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto comma = rows[i].find(',');
        const double x = std::stod(rows[i].substr(0, comma)), v = std::stod(rows[i].substr(comma + 1));
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    CHECK(std::abs(best - kTsirelson) < 1e-3);
    CHECK(std::abs(best_x - std::numbers::pi / 8) < 0.04);

    const Outcome v = invoke({"sweep", "--scenario", "initial", "--quantity", "v", "--param", "theta", "--from", "0",
                              "--to", "0.7853981633974483", "--steps", "3", "--grid", "16"});
    const auto vrows = lines(v.out);
    REQUIRE(vrows.size() == 4);
    CHECK(std::abs(std::stod(vrows[1].substr(vrows[1].find(',') + 1)) - 35.0 / 512) < 1e-12);
    CHECK(std::abs(std::stod(vrows[3].substr(vrows[3].find(',') + 1)) - 45.0 / 1024) < 1e-12);

    const Outcome two = invoke({"sweep", "--quantity", "correlator", "--param", "theta1", "--steps", "4", "--param2",
                                "theta2", "--steps2", "3"});
    const auto trows = lines(two.out);
    REQUIRE(trows.size() == 13);
    CHECK(trows[0] == "theta1,theta2,correlator");
    // outer parameter varies slowest
    CHECK(trows[1].substr(0, 2) == "0,");
    CHECK(trows[3].substr(0, 2) == "0,");
    CHECK(trows[4].substr(0, 2) != "0,");

    CHECK(invoke({"sweep", "--param", "theta1", "--steps", "1"}).code == 2);
    CHECK(invoke({"sweep", "--param", "nope", "--steps", "3"}).code == 2);
}

TEST_CASE("optimize subcommand") {
    const auto ent = invoke_json({"optimize", "--scenario", "entangled-history", "--restarts", "8"});
    CHECK(std::abs(ent["result"]["best_abs_S_temporal"].get<double>() - kTsirelson) < 1e-6);
    const auto zz = invoke_json({"optimize", "--scenario", "product-history", "--t1", "z+", "--t2", "z+", "--restarts", "8"});
    CHECK(std::abs(zz["result"]["best_abs_S_temporal"].get<double>() - 2.0) < 1e-6);

    const Outcome a = invoke({"optimize", "--restarts", "4", "--seed", "12", "--format", "json"});
    const Outcome b = invoke({"optimize", "--restarts", "4", "--seed", "12", "--format", "json"});
    CHECK(a.out == b.out);
}

TEST_CASE("JSON output round-trips byte for byte") {
    const std::vector<std::vector<std::string>> cmds{
        {"chsh", "--angles", kTsirelsonQuad},
        {"tchsh", "--scenario", "initial", "--theta", "0.3", "--phi", "1.7"},
        {"vfunc", "--scenario", "product-history", "--theta", "0.2", "--theta-prime", "1.1"},
        {"protocol", "--t1", "0.5,0.5", "--t2", "1,2"},
        {"sweep", "--param", "theta3", "--steps", "5"},
    };
    for (auto args : cmds) {
        args.push_back("--format");
        args.push_back("json");
        const Outcome o = invoke(args);
        REQUIRE(o.code == 0);
        const std::string first_line = o.out.substr(0, o.out.size() - 1);
        CHECK(ordered_json::parse(first_line).dump() == first_line);
        CHECK(invoke(args).out == o.out);
    }
}

TEST_CASE("CSV output uses full precision") {
    const Outcome o = invoke({"tchsh", "--scenario", "initial", "--format", "csv"});
    CHECK(o.out.rfind("key,value\n", 0) == 0);
    CHECK(o.out.find("S_temporal,2.8284271247461") != std::string::npos);
}

TEST_CASE("binary exit codes") {
    CHECK(exit_status_of("chsh --angles " + kTsirelsonQuad) == 0);
    CHECK(exit_status_of("chsh --angles 1,2,3") == 2);
    CHECK(exit_status_of("tchsh --scenario product-history --t1 z+ --t2 z-") == 3);
    CHECK(exit_status_of("vfunc --grid 2") == 2);
    CHECK(exit_status_of("no-such-command") == 2);
    CHECK(exit_status_of("--help") == 0);
}
