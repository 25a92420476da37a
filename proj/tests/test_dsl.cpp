#include <doctest.h>

#include <string>

#include "phasebench/dsl.hpp"

using namespace phasebench;
using namespace phasebench::dsl;

namespace {

const std::string kReferenceProgram =
    "# reference configuration\n"
    "pump D\n"
    "gp qwp 45\n"
    "gp hwp 0\n"
    "gp qwp 45\n"
    "source p=0.5 v=1\n"
    "detector eta_s=0.2 eta_i=0.2 dark=500 window=1.6 pairs=1000000 acq=1\n"
    "scan gp_hwp from 0 to 90 step 2.5\n"
    "measure bell\n"
    "seed 7\n";

int error_count(const std::vector<ParseDiagnostic>& diags) {
    int n = 0;
    for (const auto& d : diags)
        if (d.severity == Severity::Error) ++n;
    return n;
}

}  // namespace

TEST_CASE("reference program parses clean") {
    const ParseResult res = parse(kReferenceProgram);
    REQUIRE(res.ok());
    CHECK(res.diagnostics.empty());
    const BenchProgram& p = *res.program;
    CHECK(p.pump == Basis::D);
    CHECK(p.gp_elements.size() == 3);
    CHECK(p.gp_elements[1].kind == GpElement::Kind::Hwp);
    CHECK(p.source_p == 0.5);
    CHECK(p.detector.window_ns == 1.6);
    CHECK(p.scan.axis == ScanAxis::GpHwp);
    CHECK(p.measure == MeasureKind::Bell);
    CHECK(p.seed == 7);
}

TEST_CASE("missing pump is a located whole-program error") {
    const std::string text =
        "source p=0.5 v=1\n"
        "detector eta_s=0.2 eta_i=0.2 dark=0 window=0 pairs=1000 acq=1\n"
        "scan gp_hwp from 0 to 10 step 1\n"
        "measure classical\n";
    const ParseResult res = parse(text);
    CHECK_FALSE(res.ok());
    REQUIRE(error_count(res.diagnostics) == 1);
    CHECK(res.diagnostics[0].line == 0);
    CHECK(res.diagnostics[0].message == "pump not declared");
}

TEST_CASE("malformed numbers carry their location") {
    const ParseResult res = parse("pump D\ngp hwp ninety\n");
    CHECK_FALSE(res.ok());
    bool found = false;
    for (const auto& d : res.diagnostics)
        if (d.line == 2 && d.column == 8 && d.message.find("ninety") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("grammar error classes all produce located diagnostics") {
    struct Case {
        const char* text;
        const char* needle;
    };
    const Case cases[] = {
        {"pump X\n", "unknown pump polarization"},
        {"pump D\npump H\n", "duplicate 'pump'"},
        {"teleport now\n", "unknown statement"},
        {"gp owp 45\n", "unknown GP element"},
        {"source p=0.5 q=1\n", "unknown key 'q'"},
        {"source p=1.5 v=1\n", "must be in [0, 1]"},
        {"detector eta_s=0.2 eta_i=0.2 dark=0 window=0 pairs=1e6\n", "expects 6 argument"},
        {"scan gp_hwp from 10 to 0 step 1\n", "range is empty"},
        {"scan gp_hwp from 0 to 10 step 0\n", "step must be positive"},
        {"scan sideways from 0 to 1 step 1\n", "unknown scan axis"},
        {"scan gp_hwp since 0 to 1 step 1\n", "expected 'from'"},
        {"measure everything\n", "unknown measurement"},
        {"seed -4\n", "unsigned integer"},
    };
    for (const auto& c : cases) {
        const ParseResult res = parse(c.text);
        CHECK_FALSE(res.ok());
        bool located = false;
        for (const auto& d : res.diagnostics)
            if (d.message.find(c.needle) != std::string::npos && d.line >= 1 && d.column >= 1)
                located = true;
        INFO("case: ", c.text);
        CHECK(located);
    }
}

TEST_CASE("parsing collects every diagnostic in order") {
    const std::string text =
        "pump X\n"
        "gp hwp ninety\n"
        "source p=2 v=1\n";
    const ParseResult res = parse(text);
    CHECK(res.diagnostics.size() >= 3);
    for (std::size_t k = 1; k < res.diagnostics.size(); ++k) {
        const auto& a = res.diagnostics[k - 1];
        const auto& b = res.diagnostics[k];
        CHECK((a.line < b.line || (a.line == b.line && a.column <= b.column)));
    }
}

TEST_CASE("legal but odd values warn without failing") {
    const std::string text =
        "pump D\n"
        "gp hwp 0\n"
        "source p=0.5 v=1\n"
        "detector eta_s=0.95 eta_i=0.2 dark=0 window=150 pairs=1000 acq=1\n"
        "scan gp_hwp from 0 to 10 step 1\n"
        "measure classical\n";
    const ParseResult res = parse(text);
    CHECK(res.ok());
    REQUIRE(res.diagnostics.size() == 2);
    CHECK(res.diagnostics[0].severity == Severity::Warning);
    CHECK(res.diagnostics[1].severity == Severity::Warning);
}

TEST_CASE("pretty-print round trip") {
    const ParseResult first = parse(kReferenceProgram);
    REQUIRE(first.ok());
    const std::string printed = pretty_print(*first.program);
    const ParseResult second = parse(printed);
    REQUIRE(second.ok());
    CHECK(*first.program == *second.program);

    // Including the optional statement.
    std::string with_biref = kReferenceProgram;
    with_biref += "birefringence phiH=10 phiV=-35.5\n";
    const ParseResult third = parse(with_biref);
    REQUIRE(third.ok());
    const ParseResult fourth = parse(pretty_print(*third.program));
    REQUIRE(fourth.ok());
    CHECK(*third.program == *fourth.program);
}

TEST_CASE("compilation folds the GP stack") {
    const ParseResult res = parse(kReferenceProgram);
    REQUIRE(res.ok());
    const CompileResult compiled = compile(*res.program);
    REQUIRE(compiled.ok());
    const RunPlan& plan = *compiled.plan;

    CHECK(plan.scan_deg.size() == 37);
    CHECK(plan.scanned_hwp_index == 1);

    // The stack matches the ideal transfer matrix up to a global phase.
    const double theta = deg2rad(33.0);
    const JonesMatrix folded = plan.gp_matrix(33.0);
    const JonesMatrix ideal = qhq_transfer(theta);
    const cdouble phase = folded(0, 0) / ideal(0, 0);
    CHECK(max_abs_diff(folded, phase * ideal) < 1e-12);

    // Compilation is pure: same program, same plan.
    const CompileResult again = compile(*res.program);
    REQUIRE(again.ok());
    CHECK(max_abs_diff(again.plan->gp_matrix(33.0), folded) == 0.0);
    CHECK(again.plan->scan_deg == plan.scan_deg);
}

TEST_CASE("empty GP list compiles to the identity") {
    const std::string text =
        "pump H\n"
        "source p=0.5 v=1\n"
        "detector eta_s=0.2 eta_i=0.2 dark=0 window=0 pairs=1000 acq=1\n"
        "scan analyzer_i_hwp from 0 to 90 step 5\n"
        "measure fringe\n";
    const ParseResult res = parse(text);
    REQUIRE(res.ok());
    const CompileResult compiled = compile(*res.program);
    REQUIRE(compiled.ok());
    CHECK(max_abs_diff(compiled.plan->gp_matrix(), JonesMatrix::identity()) == 0.0);
}

TEST_CASE("semantic errors carry the scan location") {
    // Tomography cannot sweep analyzer angles.
    std::string text =
        "pump D\n"
        "gp hwp 0\n"
        "source p=0.5 v=1\n"
        "detector eta_s=0.2 eta_i=0.2 dark=0 window=0 pairs=1000 acq=1\n"
        "scan analyzer_i_hwp from 0 to 90 step 5\n"
        "measure tomo\n";
    const ParseResult res = parse(text);
    REQUIRE(res.ok());
    const CompileResult compiled = compile(*res.program);
    CHECK_FALSE(compiled.ok());
    REQUIRE(error_count(compiled.diagnostics) == 1);
    CHECK(compiled.diagnostics[0].line == 5);

    // A gp_hwp scan needs exactly one half-wave plate in the stack.
    text =
        "pump D\n"
        "gp qwp 45\n"
        "source p=0.5 v=1\n"
        "detector eta_s=0.2 eta_i=0.2 dark=0 window=0 pairs=1000 acq=1\n"
        "scan gp_hwp from 0 to 90 step 5\n"
        "measure bell\n";
    const ParseResult res2 = parse(text);
    REQUIRE(res2.ok());
    const CompileResult compiled2 = compile(*res2.program);
    CHECK_FALSE(compiled2.ok());
    CHECK(compiled2.diagnostics[0].message.find("exactly one") != std::string::npos);
}
