#include "phasebench/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace phasebench::dsl {

namespace {

struct Token {
    std::string text;
    int column = 0;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != '#')
            ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

class LineParser {
  public:
    LineParser(std::vector<ParseDiagnostic>& diags, int line) : diags_(diags), line_(line) {}

    void error(int column, std::string msg) {
        diags_.push_back({line_, column, std::move(msg), Severity::Error});
    }
    void warning(int column, std::string msg) {
        diags_.push_back({line_, column, std::move(msg), Severity::Warning});
    }

    bool parse_number(const Token& tok, double& out) {
        const char* first = tok.text.data();
        const char* last = first + tok.text.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last) {
            error(tok.column, "expected a number, got '" + tok.text + "'");
            return false;
        }
        return true;
    }

    bool parse_u64(const Token& tok, std::uint64_t& out) {
        const char* first = tok.text.data();
        const char* last = first + tok.text.size();
        const auto res = std::from_chars(first, last, out);
        if (res.ec != std::errc{} || res.ptr != last) {
            error(tok.column, "expected an unsigned integer, got '" + tok.text + "'");
            return false;
        }
        return true;
    }

    // key=value item; reports both unknown keys and malformed values.
    bool parse_kv(const Token& tok, const std::vector<std::string>& keys, std::string& key,
                  double& value) {
        const auto eq = tok.text.find('=');
        if (eq == std::string::npos) {
            error(tok.column, "expected key=value, got '" + tok.text + "'");
            return false;
        }
        key = tok.text.substr(0, eq);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            error(tok.column, "unknown key '" + key + "'");
            return false;
        }
        Token vtok{tok.text.substr(eq + 1), tok.column + static_cast<int>(eq) + 1};
        if (vtok.text.empty()) {
            error(vtok.column, "missing value for '" + key + "'");
            return false;
        }
        return parse_number(vtok, value);
    }

  private:
    std::vector<ParseDiagnostic>& diags_;
    int line_;
};

std::optional<Basis> basis_from_name(const std::string& name) {
    static const std::map<std::string, Basis> table{{"H", Basis::H}, {"V", Basis::V},
                                                    {"D", Basis::D}, {"A", Basis::A},
                                                    {"R", Basis::R}, {"L", Basis::L}};
    const auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

std::string format_angle(double deg) {
    std::ostringstream os;
    os.precision(17);
    os << deg;
    return os.str();
}

}  // namespace

bool ParseResult::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

bool CompileResult::ok() const {
    return std::none_of(diagnostics.begin(), diagnostics.end(),
                        [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

DetectorModel DetectorSpec::to_model() const {
    DetectorModel det;
    det.eta_s = eta_s;
    det.eta_i = eta_i;
    det.dark_s = dark_hz;
    det.dark_i = dark_hz;
    det.pair_rate = pairs_hz;
    det.window = window_ns * 1e-9;
    det.acquisition = acq_s;
    return det;
}

ParseResult parse(const std::string& source_text) {
    ParseResult result;
    BenchProgram prog;
    auto& diags = result.diagnostics;

    bool seen_pump = false, seen_source = false, seen_detector = false, seen_scan = false,
         seen_measure = false, seen_seed = false, seen_biref = false;

    std::istringstream stream(source_text);
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const auto toks = tokenize(raw);
        if (toks.empty()) continue;
        LineParser lp(diags, line_no);
        const std::string& head = toks[0].text;

        const auto check_argc = [&](std::size_t want) {
            if (toks.size() == want) return true;
            lp.error(toks[0].column, "'" + head + "' expects " + std::to_string(want - 1) +
                                         " argument(s), got " + std::to_string(toks.size() - 1));
            return false;
        };
        const auto check_single = [&](bool& seen) {
            if (seen) {
                lp.error(toks[0].column, "duplicate '" + head + "' statement");
                return false;
            }
            seen = true;
            return true;
        };

        if (head == "pump") {
            if (!check_single(seen_pump) || !check_argc(2)) continue;
            const auto b = basis_from_name(toks[1].text);
            if (!b) {
                lp.error(toks[1].column, "unknown pump polarization '" + toks[1].text +
                                             "' (expected H, V, D, A, R or L)");
                continue;
            }
            prog.pump = *b;
        } else if (head == "gp") {
            if (!check_argc(3)) continue;
            GpElement el;
            el.line = line_no;
            if (toks[1].text == "qwp")
                el.kind = GpElement::Kind::Qwp;
            else if (toks[1].text == "hwp")
                el.kind = GpElement::Kind::Hwp;
            else {
                lp.error(toks[1].column,
                         "unknown GP element '" + toks[1].text + "' (expected qwp or hwp)");
                continue;
            }
            if (!lp.parse_number(toks[2], el.angle_deg)) continue;
            prog.gp_elements.push_back(el);
        } else if (head == "source") {
            if (!check_single(seen_source) || !check_argc(3)) continue;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                std::string key;
                double value = 0.0;
                if (!lp.parse_kv(toks[k], {"p", "v"}, key, value)) continue;
                if (value < 0.0 || value > 1.0) {
                    lp.error(toks[k].column, "'" + key + "' must be in [0, 1]");
                    continue;
                }
                (key == "p" ? prog.source_p : prog.source_v) = value;
            }
        } else if (head == "birefringence") {
            if (!check_single(seen_biref) || !check_argc(3)) continue;
            double phi_h = 0.0, phi_v = 0.0;
            bool got_h = false, got_v = false;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                std::string key;
                double value = 0.0;
                if (!lp.parse_kv(toks[k], {"phiH", "phiV"}, key, value)) continue;
                if (key == "phiH") {
                    phi_h = value;
                    got_h = true;
                } else {
                    phi_v = value;
                    got_v = true;
                }
            }
            if (got_h && got_v) prog.birefringence_deg = {phi_h, phi_v};
        } else if (head == "detector") {
            if (!check_single(seen_detector) || !check_argc(7)) continue;
            bool all_ok = true;
            for (std::size_t k = 1; k < toks.size(); ++k) {
                std::string key;
                double value = 0.0;
                if (!lp.parse_kv(toks[k],
                                 {"eta_s", "eta_i", "dark", "window", "pairs", "acq"}, key,
                                 value)) {
                    all_ok = false;
                    continue;
                }
                if (value < 0.0) {
                    lp.error(toks[k].column, "'" + key + "' must be non-negative");
                    all_ok = false;
                    continue;
                }
                if ((key == "eta_s" || key == "eta_i") && value > 1.0) {
                    lp.error(toks[k].column, "'" + key + "' must be in [0, 1]");
                    all_ok = false;
                    continue;
                }
                if ((key == "eta_s" || key == "eta_i") && value > 0.9)
                    lp.warning(toks[k].column,
                               "detection efficiency above 0.9 is unusually high");
                if (key == "window" && value > 100.0)
                    lp.warning(toks[k].column, "coincidence window above 100 ns");
                if (key == "eta_s") prog.detector.eta_s = value;
                else if (key == "eta_i") prog.detector.eta_i = value;
                else if (key == "dark") prog.detector.dark_hz = value;
                else if (key == "window") prog.detector.window_ns = value;
                else if (key == "pairs") prog.detector.pairs_hz = value;
                else if (key == "acq") prog.detector.acq_s = value;
            }
            if (all_ok && prog.detector.acq_s <= 0.0)
                lp.error(toks[0].column, "'acq' must be positive");
        } else if (head == "scan") {
            if (!check_single(seen_scan) || !check_argc(8)) continue;
            ScanSpec scan;
            scan.line = line_no;
            if (toks[1].text == "gp_hwp")
                scan.axis = ScanAxis::GpHwp;
            else if (toks[1].text == "analyzer_i_hwp")
                scan.axis = ScanAxis::AnalyzerIHwp;
            else {
                lp.error(toks[1].column, "unknown scan axis '" + toks[1].text +
                                             "' (expected gp_hwp or analyzer_i_hwp)");
                continue;
            }
            bool ok = true;
            const auto expect_word = [&](std::size_t idx, const char* word) {
                if (toks[idx].text == word) return true;
                lp.error(toks[idx].column,
                         std::string("expected '") + word + "', got '" + toks[idx].text + "'");
                ok = false;
                return false;
            };
            expect_word(2, "from");
            expect_word(4, "to");
            expect_word(6, "step");
            ok &= lp.parse_number(toks[3], scan.from_deg);
            ok &= lp.parse_number(toks[5], scan.to_deg);
            ok &= lp.parse_number(toks[7], scan.step_deg);
            if (!ok) continue;
            if (scan.step_deg <= 0.0) {
                lp.error(toks[7].column, "scan step must be positive");
                continue;
            }
            if (scan.to_deg < scan.from_deg) {
                lp.error(toks[3].column, "scan range is empty (to < from)");
                continue;
            }
            prog.scan = scan;
        } else if (head == "measure") {
            if (!check_single(seen_measure) || !check_argc(2)) continue;
            static const std::map<std::string, MeasureKind> kinds{
                {"fringe", MeasureKind::Fringe},
                {"bell", MeasureKind::Bell},
                {"tomo", MeasureKind::Tomo},
                {"classical", MeasureKind::Classical}};
            const auto it = kinds.find(toks[1].text);
            if (it == kinds.end()) {
                lp.error(toks[1].column, "unknown measurement '" + toks[1].text +
                                             "' (expected fringe, bell, tomo or classical)");
                continue;
            }
            prog.measure = it->second;
        } else if (head == "seed") {
            if (!check_single(seen_seed) || !check_argc(2)) continue;
            lp.parse_u64(toks[1], prog.seed);
        } else {
            lp.error(toks[0].column, "unknown statement '" + head + "'");
        }
    }

    if (!seen_pump) diags.push_back({0, 0, "pump not declared", Severity::Error});
    if (!seen_source) diags.push_back({0, 0, "source not declared", Severity::Error});
    if (!seen_detector) diags.push_back({0, 0, "detector not declared", Severity::Error});
    if (!seen_scan) diags.push_back({0, 0, "scan not declared", Severity::Error});
    if (!seen_measure) diags.push_back({0, 0, "measure not declared", Severity::Error});

    std::stable_sort(diags.begin(), diags.end(), [](const auto& a, const auto& b) {
        return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    if (result.ok()) result.program = std::move(prog);
    return result;
}

std::string pretty_print(const BenchProgram& p) {
    std::ostringstream os;
    os << "pump " << basis_name(p.pump) << "\n";
    for (const auto& el : p.gp_elements)
        os << "gp " << (el.kind == GpElement::Kind::Qwp ? "qwp " : "hwp ")
           << format_angle(el.angle_deg) << "\n";
    os << "source p=" << format_angle(p.source_p) << " v=" << format_angle(p.source_v) << "\n";
    if (p.birefringence_deg)
        os << "birefringence phiH=" << format_angle(p.birefringence_deg->first)
           << " phiV=" << format_angle(p.birefringence_deg->second) << "\n";
    os << "detector eta_s=" << format_angle(p.detector.eta_s)
       << " eta_i=" << format_angle(p.detector.eta_i)
       << " dark=" << format_angle(p.detector.dark_hz)
       << " window=" << format_angle(p.detector.window_ns)
       << " pairs=" << format_angle(p.detector.pairs_hz)
       << " acq=" << format_angle(p.detector.acq_s) << "\n";
    os << "scan " << (p.scan.axis == ScanAxis::GpHwp ? "gp_hwp" : "analyzer_i_hwp") << " from "
       << format_angle(p.scan.from_deg) << " to " << format_angle(p.scan.to_deg) << " step "
       << format_angle(p.scan.step_deg) << "\n";
    os << "measure " << measure_name(p.measure) << "\n";
    os << "seed " << p.seed << "\n";
    return os.str();
}

JonesMatrix RunPlan::gp_matrix(std::optional<double> hwp_override_deg) const {
    JonesMatrix m = JonesMatrix::identity();
    for (std::size_t k = 0; k < gp_elements.size(); ++k) {
        double angle = gp_elements[k].angle_deg;
        if (hwp_override_deg && static_cast<int>(k) == scanned_hwp_index)
            angle = *hwp_override_deg;
        const JonesMatrix el = gp_elements[k].kind == GpElement::Kind::Qwp
                                   ? quarter_wave_plate(deg2rad(angle))
                                   : half_wave_plate(deg2rad(angle));
        m = el * m;  // first listed element acts first
    }
    return m;
}

PumpState RunPlan::pump_state(std::optional<double> hwp_override_deg) const {
    PumpState out;
    out.jones = (gp_matrix(hwp_override_deg) * basis_vector(pump)).normalized();
    return out;
}

CompileResult compile(const BenchProgram& program) {
    CompileResult result;
    auto& diags = result.diagnostics;

    RunPlan plan;
    plan.kind = program.measure;
    plan.pump = program.pump;
    plan.gp_elements = program.gp_elements;
    plan.imperfection.amplitude_p = program.source_p;
    plan.imperfection.werner_v = program.source_v;
    if (program.birefringence_deg)
        plan.birefringence = {deg2rad(program.birefringence_deg->first),
                              deg2rad(program.birefringence_deg->second)};
    plan.detector = program.detector.to_model();
    plan.scan_axis = program.scan.axis;
    plan.seed = program.seed;

    try {
        plan.detector.validate();
    } catch (const std::invalid_argument& e) {
        diags.push_back({0, 0, std::string("detector: ") + e.what(), Severity::Error});
    }

    if (program.scan.axis == ScanAxis::GpHwp) {
        int hwp_count = 0;
        for (std::size_t k = 0; k < program.gp_elements.size(); ++k)
            if (program.gp_elements[k].kind == GpElement::Kind::Hwp) {
                plan.scanned_hwp_index = static_cast<int>(k);
                ++hwp_count;
            }
        if (hwp_count != 1)
            diags.push_back({program.scan.line, 0,
                             "scan gp_hwp needs exactly one 'gp hwp' element, found " +
                                 std::to_string(hwp_count),
                             Severity::Error});
    } else {
        if (program.measure == MeasureKind::Tomo || program.measure == MeasureKind::Bell ||
            program.measure == MeasureKind::Classical)
            diags.push_back({program.scan.line, 0,
                             "measure " + measure_name(program.measure) +
                                 " scans the GP half-wave plate, not analyzer angles",
                             Severity::Error});
    }

    try {
        plan.scan_deg = make_grid(program.scan.from_deg, program.scan.to_deg,
                                  program.scan.step_deg);
    } catch (const std::invalid_argument& e) {
        diags.push_back({program.scan.line, 0, e.what(), Severity::Error});
    }

    std::stable_sort(diags.begin(), diags.end(), [](const auto& a, const auto& b) {
        return a.line != b.line ? a.line < b.line : a.column < b.column;
    });
    if (result.ok()) result.plan = std::move(plan);
    return result;
}

std::string severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

std::string measure_name(MeasureKind m) {
    switch (m) {
        case MeasureKind::Fringe: return "fringe";
        case MeasureKind::Bell: return "bell";
        case MeasureKind::Tomo: return "tomo";
        case MeasureKind::Classical: return "classical";
    }
    return "?";
}

}  // namespace phasebench::dsl
