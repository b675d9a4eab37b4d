#pragma once

#include "lpq/linalg.hpp"

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace lpq {

/// Axis-aligned box with extended-real bounds; closed on finite sides.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    static Box unbounded(std::size_t dim);

    std::size_t dim() const { return lower.size(); }
    bool empty() const;
    bool bounded() const;
    /// Lebesgue measure; +inf for unbounded boxes, 0 for empty ones.
    double volume() const;
    bool contains(std::span<const double> x) const;
    Box intersect(const Box& other) const;
};

/// A measurable subset Omega of R^n given declaratively, with its indicator I_Omega.
///
/// Kinds: all of R^n, a closed box, a closed halfspace {x : normal . x >= offset},
/// the complement of a region, and a finite intersection. Immutable; cheap to copy.
class Region {
public:
    enum class Kind { all, box, halfspace, complement, intersection };

    static Region all(std::size_t dim);
    static Region box(Box b);
    static Region box(std::vector<double> lower, std::vector<double> upper);
    static Region halfspace(std::vector<double> normal, double offset);
    static Region complement(Region of);
    static Region intersection(std::vector<Region> parts);

    /// Parses the region schema: {"kind": "box", "box": [[lo, hi], ...]},
    /// {"kind": "halfspace", "normal": [...], "offset": c}, {"kind": "all", "dim": n},
    /// {"kind": "complement", "of": {...}}, {"kind": "intersection", "parts": [...]}.
    /// "inf"/"-inf" strings are accepted for infinite bounds.
    static Region from_json(const nlohmann::json& j);
    static Region parse(std::string_view text);
    nlohmann::json to_json() const;

    Kind kind() const;
    std::size_t dim() const;
    bool contains(std::span<const double> x) const;
    double indicator(std::span<const double> x) const { return contains(x) ? 1.0 : 0.0; }

    /// Smallest axis-aligned box known to contain the region (may be all of R^n).
    Box bounding_box() const;
    /// True when the region coincides with its bounding box up to a null set,
    /// so integrating over the box needs no indicator.
    bool is_box() const;

    /// Points along `axis` where the indicator may jump when coordinates
    /// [0, axis) are fixed to `prefix` and the rest are free. Only breaks that
    /// do not depend on the free coordinates are reported.
    void axis_breaks(std::size_t axis, std::span<const double> prefix, std::vector<double>& out) const;

    /// The region {y : A y + m in Omega} for invertible A.
    Region pullback(const Matrix& a, const Vector& m) const;

    std::string describe() const;

private:
    struct Node;
    explicit Region(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

double parse_extended_real(const nlohmann::json& j);
nlohmann::json extended_real_to_json(double v);

} // namespace lpq
