#pragma once

#include <string>
#include <vector>

#include "diskflow/energy.hpp"
#include "diskflow/field.hpp"

namespace diskflow {

// Snapshot container: a short text preamble, then per field one self-describing
// header line followed by the component grids as little-endian 8-byte floats.
struct NamedField {
    std::string name;
    Field field;
};

struct FieldContainer {
    std::string config_hash;
    std::vector<NamedField> fields;

    const Field* find(const std::string& name) const;
};

void write_field_container(const std::string& path, const std::vector<NamedField>& fields,
                           const std::string& config_hash);
FieldContainer read_field_container(const std::string& path);

// CSV with a "# config-hash <hex>" first line so tables can be matched to the
// configuration that produced them.  Values are round-trip formatted (%.17g).
struct CsvData {
    std::string config_hash;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const std::string& config_hash,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
CsvData read_csv(const std::string& path);

// Run manifest: structured text of key/value lines (config hash, versions,
// wall times, artifact list).
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

// Stable energy-table schema at order r: t, the interior blocks E{s}{k} with
// s+k = r in ascending k, Kr, Wr1 and its square, Er, Erstar, eps, calE, K, M.
std::vector<std::string> energy_columns(int r);
std::vector<double> energy_row(double t, const EnergyReport& report);

} // namespace diskflow
