// Line-oriented bench-description language. One statement per line, `#`
// starts a comment, angles are written in degrees:
//
//   pump <H|V|D|A|R|L>
//   gp qwp <deg> | gp hwp <deg>        (repeatable, order significant)
//   source p=<0..1> v=<0..1>
//   birefringence phiH=<deg> phiV=<deg>   (optional)
//   detector eta_s=<f> eta_i=<f> dark=<hz> window=<ns> pairs=<hz> acq=<s>
//   scan <gp_hwp|analyzer_i_hwp> from <deg> to <deg> step <deg>
//   measure <fringe|bell|tomo|classical>
//   seed <u64>                         (optional, default 1)
//
// Parsing never stops at the first problem: every diagnostic is collected,
// ordered by line then column. Numbers and keywords carry their source
// location into the messages. Physically odd but legal values (eta > 0.9,
// window > 100 ns) produce warnings, not errors.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phasebench/counting.hpp"
#include "phasebench/measurement.hpp"
#include "phasebench/source.hpp"

namespace phasebench::dsl {

enum class Severity { Error, Warning };

struct ParseDiagnostic {
    int line = 0;  // 1-based; 0 for whole-program problems
    int column = 0;
    std::string message;
    Severity severity = Severity::Error;
};

struct GpElement {
    enum class Kind { Qwp, Hwp };
    Kind kind = Kind::Qwp;
    double angle_deg = 0.0;
    int line = 0;  // not part of program equality

    bool operator==(const GpElement& o) const {
        return kind == o.kind && angle_deg == o.angle_deg;
    }
};

enum class ScanAxis { GpHwp, AnalyzerIHwp };
enum class MeasureKind { Fringe, Bell, Tomo, Classical };

struct ScanSpec {
    ScanAxis axis = ScanAxis::GpHwp;
    double from_deg = 0.0;
    double to_deg = 0.0;
    double step_deg = 1.0;
    int line = 0;

    bool operator==(const ScanSpec& o) const {
        return axis == o.axis && from_deg == o.from_deg && to_deg == o.to_deg &&
               step_deg == o.step_deg;
    }
};

struct DetectorSpec {
    double eta_s = 0.0, eta_i = 0.0;
    double dark_hz = 0.0;
    double window_ns = 0.0;
    double pairs_hz = 0.0;
    double acq_s = 0.0;

    bool operator==(const DetectorSpec&) const = default;
    DetectorModel to_model() const;
};

struct BenchProgram {
    Basis pump = Basis::D;
    std::vector<GpElement> gp_elements;
    double source_p = 0.5;
    double source_v = 1.0;
    std::optional<std::pair<double, double>> birefringence_deg;  // (phiH, phiV)
    DetectorSpec detector;
    ScanSpec scan;
    MeasureKind measure = MeasureKind::Classical;
    std::uint64_t seed = 1;

    bool operator==(const BenchProgram& o) const {
        return pump == o.pump && gp_elements == o.gp_elements && source_p == o.source_p &&
               source_v == o.source_v && birefringence_deg == o.birefringence_deg &&
               detector == o.detector && scan == o.scan && measure == o.measure &&
               seed == o.seed;
    }
};

struct ParseResult {
    std::optional<BenchProgram> program;  // present iff no error diagnostics
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const;
};

ParseResult parse(const std::string& source_text);

/// Canonical text form; parse(pretty_print(p)) == p.
std::string pretty_print(const BenchProgram& program);

/// Executable plan compiled from a diagnostics-free program: the GP element
/// list folds into a Jones matrix (per scan point for gp_hwp scans), the
/// scan expands into a concrete grid, detector and imperfection records are
/// instantiated. Pure value.
struct RunPlan {
    MeasureKind kind = MeasureKind::Classical;
    Basis pump = Basis::D;
    std::vector<GpElement> gp_elements;
    int scanned_hwp_index = -1;  // index into gp_elements for gp_hwp scans
    SourceImperfection imperfection;
    std::optional<std::pair<double, double>> birefringence;  // radians
    DetectorModel detector;
    ScanAxis scan_axis = ScanAxis::GpHwp;
    std::vector<double> scan_deg;  // expanded grid, degrees
    std::uint64_t seed = 1;

    /// GP stack matrix; for gp_hwp scans the swept element takes
    /// hwp_override_deg.
    JonesMatrix gp_matrix(std::optional<double> hwp_override_deg = std::nullopt) const;

    /// Pump state behind the GP stack.
    PumpState pump_state(std::optional<double> hwp_override_deg = std::nullopt) const;
};

struct CompileResult {
    std::optional<RunPlan> plan;
    std::vector<ParseDiagnostic> diagnostics;

    bool ok() const;
};

CompileResult compile(const BenchProgram& program);

std::string severity_name(Severity s);
std::string measure_name(MeasureKind m);

}  // namespace phasebench::dsl
