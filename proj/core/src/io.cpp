#include "diskflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace diskflow {

namespace {

constexpr const char* kMagic = "diskflow-fields v1";

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_doubles(std::ostream& out, const ArrayXXd& a) {
    out.write(reinterpret_cast<const char*>(a.data()),
              std::streamsize(sizeof(double)) * a.size());
}

void read_doubles(std::istream& in, ArrayXXd& a, const std::string& path) {
    in.read(reinterpret_cast<char*>(a.data()), std::streamsize(sizeof(double)) * a.size());
    if (!in) throw IoError("truncated field data in '" + path + "'");
}

} // namespace

const Field* FieldContainer::find(const std::string& name) const {
    for (const auto& nf : fields)
        if (nf.name == name) return &nf.field;
    return nullptr;
}

void write_field_container(const std::string& path, const std::vector<NamedField>& fields,
                           const std::string& config_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << kMagic << "\n"
        << "config-hash " << config_hash << "\n"
        << "count " << fields.size() << "\n";
    for (const auto& nf : fields) {
        const Field& f = nf.field;
        if (nf.name.empty() || nf.name.find_first_of(" \n") != std::string::npos)
            throw IoError("field name '" + nf.name + "' must be nonempty without spaces");
        out << "field " << nf.name << " rank " << f.rank() << " frame "
            << (f.frame() == Frame::Eulerian ? 'E' : 'L') << " dims " << f.n_r() << " "
            << f.n_theta() << "\n";
        for (int c = 0; c < f.n_components(); ++c) write_doubles(out, f.comp(c));
    }
    if (!out) throw IoError("write failed on '" + path + "'");
}

FieldContainer read_field_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw IoError("'" + path + "' is not a field container (bad magic)");
    FieldContainer fc;
    std::string key;
    size_t count = 0;
    {
        std::getline(in, line);
        std::istringstream h(line);
        if (!(h >> key >> fc.config_hash) || key != "config-hash")
            throw IoError("missing config-hash line in '" + path + "'");
        std::getline(in, line);
        std::istringstream c(line);
        if (!(c >> key >> count) || key != "count")
            throw IoError("missing count line in '" + path + "'");
    }
    for (size_t k = 0; k < count; ++k) {
        if (!std::getline(in, line)) throw IoError("truncated header in '" + path + "'");
        std::istringstream h(line);
        std::string name, kw1, kw2, kw3;
        int rank = -1, n_r = 0, n_theta = 0;
        char frame_ch = '?';
        if (!(h >> key >> name >> kw1 >> rank >> kw2 >> frame_ch >> kw3 >> n_r >> n_theta) ||
            key != "field" || kw1 != "rank" || kw2 != "frame" || kw3 != "dims")
            throw IoError("malformed field header in '" + path + "': " + line);
        if (rank < 0 || rank > 4 || n_r < 1 || n_theta < 1 || (frame_ch != 'E' && frame_ch != 'L'))
            throw IoError("out-of-range field header in '" + path + "': " + line);
        Field f(rank, frame_ch == 'E' ? Frame::Eulerian : Frame::Lagrangian, n_r, n_theta);
        for (int c = 0; c < f.n_components(); ++c) read_doubles(in, f.comp(c), path);
        fc.fields.push_back({name, std::move(f)});
    }
    return fc;
}

void write_csv(const std::string& path, const std::string& config_hash,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "# config-hash " << config_hash << "\n";
    for (size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw IoError("row width " + std::to_string(row.size()) + " does not match " +
                          std::to_string(columns.size()) + " columns");
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt(row[i]);
        out << "\n";
    }
    if (!out) throw IoError("write failed on '" + path + "'");
}

CsvData read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    CsvData csv;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty CSV '" + path + "'");
    {
        std::istringstream h(line);
        std::string hash_kw, mark;
        if (!(h >> mark >> hash_kw >> csv.config_hash) || mark != "#" || hash_kw != "config-hash")
            throw IoError("missing '# config-hash' line in '" + path + "'");
    }
    if (!std::getline(in, line)) throw IoError("missing header row in '" + path + "'");
    {
        std::istringstream h(line);
        std::string col;
        while (std::getline(h, col, ',')) csv.columns.push_back(col);
    }
    int lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                throw IoError("'" + path + "' line " + std::to_string(lineno) +
                              ": bad number '" + cell + "'");
            }
        }
        if (row.size() != csv.columns.size())
            throw IoError("'" + path + "' line " + std::to_string(lineno) + ": expected " +
                          std::to_string(csv.columns.size()) + " cells, got " +
                          std::to_string(row.size()));
        csv.rows.push_back(std::move(row));
    }
    return csv;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "diskflow-manifest v1\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << "\n";
    if (!out) throw IoError("write failed on '" + path + "'");
}

std::vector<std::string> energy_columns(int r) {
    std::vector<std::string> cols = {"t"};
    for (int k = 0; k <= r; ++k)
        cols.push_back("E" + std::to_string(r - k) + std::to_string(k));
    cols.insert(cols.end(), {"Kr", "Wr1", "Wr1sq", "Er", "Erstar", "eps", "calE", "K", "M"});
    return cols;
}

std::vector<double> energy_row(double t, const EnergyReport& report) {
    std::vector<double> row = {t};
    row.insert(row.end(), report.E_sk.begin(), report.E_sk.end());
    row.insert(row.end(), {report.K_r, report.W_next, report.W_next * report.W_next,
                           report.E_r, report.E_star, report.eps, report.calE, report.K_geo,
                           report.M_linf});
    return row;
}

} // namespace diskflow
