#include "diskflow/field.hpp"

namespace diskflow {

Field::Field(int rank, Frame frame, int n_r, int n_theta) : rank_(rank), frame_(frame) {
    if (rank < 0 || rank > 4) throw RankMismatch("field rank must be between 0 and 4");
    comps_.assign(std::size_t(1) << rank, ArrayXXd::Zero(n_r, n_theta));
}

Field Field::zeros_like(const Field& other) {
    return Field(other.rank_, other.frame_, other.n_r(), other.n_theta());
}

Field Field::scalar(const ArrayXXd& values) {
    Field f(0, Frame::Eulerian, int(values.rows()), int(values.cols()));
    f.comps_[0] = values;
    return f;
}

int Field::flat_index(std::initializer_list<int> idx) {
    int flat = 0;
    for (int d : idx) flat = (flat << 1) | d;
    return flat;
}

int Field::with_slot(int flat, int slot, int rank, int d) {
    int bit = rank - 1 - slot;
    return (flat & ~(1 << bit)) | (d << bit);
}

Field& Field::operator+=(const Field& other) {
    other.require(rank_, frame_, "field sum");
    for (std::size_t c = 0; c < comps_.size(); ++c) comps_[c] += other.comps_[c];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    other.require(rank_, frame_, "field difference");
    for (std::size_t c = 0; c < comps_.size(); ++c) comps_[c] -= other.comps_[c];
    return *this;
}

Field& Field::operator*=(double s) {
    for (auto& c : comps_) c *= s;
    return *this;
}

ArrayXXd Field::norm_squared() const {
    ArrayXXd out = ArrayXXd::Zero(n_r(), n_theta());
    for (const auto& c : comps_) out += c * c;
    return out;
}

double Field::max_abs() const {
    return std::sqrt(norm_squared().maxCoeff());
}

void Field::require(int rank, Frame frame, const std::string& where) const {
    if (rank_ != rank)
        throw RankMismatch(where + ": expected rank " + std::to_string(rank) + ", got " +
                           std::to_string(rank_));
    // Scalars carry no meaningful frame.
    if (rank_ > 0 && frame_ != frame) throw FrameMismatch(where + ": frame mismatch");
}

BoundaryField::BoundaryField(int rank, Frame frame, int n_theta) : rank_(rank), frame_(frame) {
    if (rank < 0 || rank > 4) throw RankMismatch("boundary field rank must be between 0 and 4");
    comps_.assign(std::size_t(1) << rank, ArrayXd::Zero(n_theta));
}

ArrayXd BoundaryField::norm_squared() const {
    ArrayXd out = ArrayXd::Zero(n_theta());
    for (const auto& c : comps_) out += c * c;
    return out;
}

BoundaryField& BoundaryField::operator-=(const BoundaryField& other) {
    if (other.rank_ != rank_) throw RankMismatch("boundary field difference: rank mismatch");
    for (std::size_t c = 0; c < comps_.size(); ++c) comps_[c] -= other.comps_[c];
    return *this;
}

BoundaryField boundary_restrict(const Field& f) {
    BoundaryField b(f.rank(), f.frame(), f.n_theta());
    for (int c = 0; c < f.n_components(); ++c) b.comp(c) = f.comp(c).row(0).transpose();
    return b;
}

} // namespace diskflow
