#pragma once

#include <string>

#include "pvc/constructions.hpp"
#include "pvc/measure.hpp"

namespace pvc {

struct MeasureFile {
    ComplexMeasure measure;
    std::string name;
    bool expect_fail = false;   // negative controls declare {"expect": "fail"}
};

/// Parse a measure spec file (strict: unknown keys are rejected). Area grids
/// load from CSV paths resolved relative to the spec file.
MeasureFile load_measure_file(const std::string& path);

MeasureFile parse_measure_json(const std::string& text, const std::string& base_dir);

/// Serialize to the spec-file schema; area components write their grid CSV
/// next to `path` as `<stem>_grid<k>.csv`.
void save_measure_file(const ComplexMeasure& m, const std::string& path,
                       const std::string& name = "", bool expect_fail = false);

/// Sidecar for a solved interval system: intervals, gap roots, Robin constant.
void save_harmonic_sidecar(const HarmonicMeasureSpec& spec, const std::string& path);

} // namespace pvc
