#pragma once

#include <string>
#include <vector>

#include "diskflow/grid.hpp"

namespace diskflow {

// Index frame a tensor's components refer to.  Eulerian components are taken
// with respect to the current fluid coordinates x, Lagrangian with respect to
// the reference disk coordinates y.  Scalars carry no frame.
enum class Frame { Eulerian, Lagrangian };

// Dense rank-r tensor field over the disk grid, components in {1,2}^r stored
// as separate scalar grids.  Component (i1,..,ir) lives at the flat index
// i1*2^(r-1) + ... + ir with zero-based direction labels.
class Field {
  public:
    Field() = default;
    Field(int rank, Frame frame, int n_r, int n_theta);
    static Field zeros_like(const Field& other);
    static Field scalar(const ArrayXXd& values);

    int rank() const { return rank_; }
    Frame frame() const { return frame_; }
    int n_components() const { return int(comps_.size()); }
    int n_r() const { return comps_.empty() ? 0 : int(comps_[0].rows()); }
    int n_theta() const { return comps_.empty() ? 0 : int(comps_[0].cols()); }

    ArrayXXd& comp(int flat) { return comps_[flat]; }
    const ArrayXXd& comp(int flat) const { return comps_[flat]; }
    ArrayXXd& comp(std::initializer_list<int> idx) { return comps_[flat_index(idx)]; }
    const ArrayXXd& comp(std::initializer_list<int> idx) const { return comps_[flat_index(idx)]; }

    static int flat_index(std::initializer_list<int> idx);
    // Index of slot `slot` inside flat component c for a rank-`rank` tensor.
    static int slot_of(int flat, int slot, int rank) { return (flat >> (rank - 1 - slot)) & 1; }
    // Flat index with slot `slot` replaced by direction d.
    static int with_slot(int flat, int slot, int rank, int d);

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);
    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }

    // Pointwise |T|^2 summed over all components.
    ArrayXXd norm_squared() const;
    double max_abs() const;

    void require(int rank, Frame frame, const std::string& where) const;

  private:
    int rank_ = 0;
    Frame frame_ = Frame::Eulerian;
    std::vector<ArrayXXd> comps_;
};

// Rank-r tensor over the boundary ring only.
class BoundaryField {
  public:
    BoundaryField() = default;
    BoundaryField(int rank, Frame frame, int n_theta);

    int rank() const { return rank_; }
    Frame frame() const { return frame_; }
    int n_theta() const { return comps_.empty() ? 0 : int(comps_[0].size()); }
    int n_components() const { return int(comps_.size()); }

    ArrayXd& comp(int flat) { return comps_[flat]; }
    const ArrayXd& comp(int flat) const { return comps_[flat]; }

    ArrayXd norm_squared() const;

    BoundaryField& operator-=(const BoundaryField& other);

  private:
    int rank_ = 0;
    Frame frame_ = Frame::Eulerian;
    std::vector<ArrayXd> comps_;
};

// Boundary ring of a volume field.
BoundaryField boundary_restrict(const Field& f);

} // namespace diskflow
