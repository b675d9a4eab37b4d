#include "lpq/region.hpp"

#include "lpq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpq {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Box Box::unbounded(std::size_t dim)
{
    return {std::vector<double>(dim, -kInf), std::vector<double>(dim, kInf)};
}

bool Box::empty() const
{
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(lower[i] <= upper[i]))
            return true;
    return false;
}

bool Box::bounded() const
{
    for (std::size_t i = 0; i < dim(); ++i)
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            return false;
    return true;
}

double Box::volume() const
{
    if (empty())
        return 0.0;
    double v = 1.0;
    for (std::size_t i = 0; i < dim(); ++i)
        v *= upper[i] - lower[i];
    return v;
}

bool Box::contains(std::span<const double> x) const
{
    for (std::size_t i = 0; i < dim(); ++i)
        if (!(x[i] >= lower[i] && x[i] <= upper[i]))
            return false;
    return true;
}

Box Box::intersect(const Box& other) const
{
    Box out = *this;
    for (std::size_t i = 0; i < dim(); ++i) {
        out.lower[i] = std::max(lower[i], other.lower[i]);
        out.upper[i] = std::min(upper[i], other.upper[i]);
    }
    return out;
}

struct Region::Node {
    Kind kind;
    std::size_t dim;
    Box box;                    // box
    std::vector<double> normal; // halfspace
    double offset = 0.0;        // halfspace
    std::vector<Region> parts;  // complement (1), intersection (>= 1)
};

namespace {

// Index of the only non-zero component, size() when zero, or size()+1 when several.
std::size_t single_axis(const std::vector<double>& normal)
{
    std::size_t found = normal.size();
    for (std::size_t i = 0; i < normal.size(); ++i) {
        if (normal[i] != 0.0) {
            if (found != normal.size())
                return normal.size() + 1;
            found = i;
        }
    }
    return found;
}

Box empty_box(std::size_t dim)
{
    return {std::vector<double>(dim, kInf), std::vector<double>(dim, -kInf)};
}

} // namespace

Region Region::all(std::size_t dim)
{
    if (dim == 0)
        throw InvalidArgument("region dimension must be positive");
    return Region(std::make_shared<const Node>(Node{Kind::all, dim, Box::unbounded(dim), {}, 0.0, {}}));
}

Region Region::box(Box b)
{
    if (b.dim() == 0 || b.lower.size() != b.upper.size())
        throw InvalidArgument("box bounds must be non-empty and of equal length");
    for (std::size_t i = 0; i < b.dim(); ++i)
        if (std::isnan(b.lower[i]) || std::isnan(b.upper[i]))
            throw InvalidArgument("box bounds must not be NaN");
    const std::size_t dim = b.dim();
    return Region(std::make_shared<const Node>(Node{Kind::box, dim, std::move(b), {}, 0.0, {}}));
}

Region Region::box(std::vector<double> lower, std::vector<double> upper)
{
    return box(Box{std::move(lower), std::move(upper)});
}

Region Region::halfspace(std::vector<double> normal, double offset)
{
    if (normal.empty())
        throw InvalidArgument("halfspace normal must be non-empty");
    for (double v : normal)
        if (!std::isfinite(v))
            throw InvalidArgument("halfspace normal must be finite");
    if (std::isnan(offset))
        throw InvalidArgument("halfspace offset must not be NaN");
    const std::size_t dim = normal.size();
    return Region(std::make_shared<const Node>(Node{Kind::halfspace, dim, {}, std::move(normal), offset, {}}));
}

Region Region::complement(Region of)
{
    const std::size_t dim = of.dim();
    return Region(std::make_shared<const Node>(Node{Kind::complement, dim, {}, {}, 0.0, {std::move(of)}}));
}

Region Region::intersection(std::vector<Region> parts)
{
    if (parts.empty())
        throw InvalidArgument("intersection needs at least one part");
    const std::size_t dim = parts.front().dim();
    for (const Region& p : parts)
        if (p.dim() != dim)
            throw InvalidArgument("intersection parts must share a dimension");
    return Region(std::make_shared<const Node>(Node{Kind::intersection, dim, {}, {}, 0.0, std::move(parts)}));
}

Region::Kind Region::kind() const { return node_->kind; }

std::size_t Region::dim() const { return node_->dim; }

bool Region::contains(std::span<const double> x) const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::all:
        return true;
    case Kind::box:
        return n.box.contains(x);
    case Kind::halfspace: {
        double s = 0.0;
        for (std::size_t i = 0; i < n.dim; ++i)
            s += n.normal[i] * x[i];
        return s >= n.offset;
    }
    case Kind::complement:
        return !n.parts.front().contains(x);
    case Kind::intersection:
        return std::all_of(n.parts.begin(), n.parts.end(), [x](const Region& p) { return p.contains(x); });
    }
    return false;
}

Box Region::bounding_box() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::all:
        return Box::unbounded(n.dim);
    case Kind::box:
        return n.box;
    case Kind::halfspace: {
        const std::size_t axis = single_axis(n.normal);
        if (axis == n.dim)
            return n.offset <= 0.0 ? Box::unbounded(n.dim) : empty_box(n.dim);
        Box b = Box::unbounded(n.dim);
        if (axis < n.dim) {
            const double cut = n.offset / n.normal[axis];
            if (n.normal[axis] > 0.0)
                b.lower[axis] = cut;
            else
                b.upper[axis] = cut;
        }
        return b;
    }
    case Kind::complement: {
        const Region& child = n.parts.front();
        if (child.kind() == Kind::all)
            return empty_box(n.dim);
        if (child.kind() == Kind::halfspace) {
            const Node& c = *child.node_;
            const std::size_t axis = single_axis(c.normal);
            if (axis < n.dim) {
                Box b = Box::unbounded(n.dim);
                const double cut = c.offset / c.normal[axis];
                if (c.normal[axis] > 0.0)
                    b.upper[axis] = cut;
                else
                    b.lower[axis] = cut;
                return b;
            }
            if (axis == n.dim)
                return c.offset <= 0.0 ? empty_box(n.dim) : Box::unbounded(n.dim);
        }
        return Box::unbounded(n.dim);
    }
    case Kind::intersection: {
        Box b = Box::unbounded(n.dim);
        for (const Region& p : n.parts)
            b = b.intersect(p.bounding_box());
        return b;
    }
    }
    return Box::unbounded(n.dim);
}

bool Region::is_box() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::all:
    case Kind::box:
        return true;
    case Kind::halfspace:
        return single_axis(n.normal) <= n.dim;
    case Kind::complement: {
        const Region& child = n.parts.front();
        if (child.kind() == Kind::all)
            return true;
        return child.kind() == Kind::halfspace && single_axis(child.node_->normal) <= n.dim;
    }
    case Kind::intersection:
        return std::all_of(n.parts.begin(), n.parts.end(), [](const Region& p) { return p.is_box(); });
    }
    return false;
}

void Region::axis_breaks(std::size_t axis, std::span<const double> prefix, std::vector<double>& out) const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::all:
        return;
    case Kind::box:
        if (std::isfinite(n.box.lower[axis]))
            out.push_back(n.box.lower[axis]);
        if (std::isfinite(n.box.upper[axis]))
            out.push_back(n.box.upper[axis]);
        return;
    case Kind::halfspace: {
        if (n.normal[axis] == 0.0)
            return;
        for (std::size_t j = axis + 1; j < n.dim; ++j)
            if (n.normal[j] != 0.0)
                return;
        double rest = n.offset;
        for (std::size_t j = 0; j < axis; ++j)
            rest -= n.normal[j] * prefix[j];
        out.push_back(rest / n.normal[axis]);
        return;
    }
    case Kind::complement:
    case Kind::intersection:
        for (const Region& p : n.parts)
            p.axis_breaks(axis, prefix, out);
        return;
    }
}

Region Region::pullback(const Matrix& a, const Vector& m) const
{
    const Node& n = *node_;
    if (a.rows() != static_cast<Eigen::Index>(n.dim) || a.cols() != static_cast<Eigen::Index>(n.dim) ||
        m.size() != static_cast<Eigen::Index>(n.dim))
        throw InvalidArgument("pullback map dimension mismatch");
    switch (n.kind) {
    case Kind::all:
        return *this;
    case Kind::halfspace: {
        const Eigen::Map<const Vector> normal(n.normal.data(), static_cast<Eigen::Index>(n.dim));
        const Vector mapped = a.transpose() * normal;
        return halfspace(std::vector<double>(mapped.data(), mapped.data() + mapped.size()), n.offset - normal.dot(m));
    }
    case Kind::box: {
        const bool diagonal = (a - Matrix(a.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
        if (diagonal) {
            Box b = Box::unbounded(n.dim);
            for (std::size_t i = 0; i < n.dim; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                const double d = a(ii, ii);
                if (d == 0.0)
                    throw InvalidArgument("pullback map is singular");
                double lo = (n.box.lower[i] - m(ii)) / d;
                double hi = (n.box.upper[i] - m(ii)) / d;
                if (d < 0.0)
                    std::swap(lo, hi);
                b.lower[i] = lo;
                b.upper[i] = hi;
            }
            return box(std::move(b));
        }
        std::vector<Region> faces;
        for (std::size_t i = 0; i < n.dim; ++i) {
            std::vector<double> e(n.dim, 0.0);
            e[i] = 1.0;
            if (std::isfinite(n.box.lower[i]))
                faces.push_back(halfspace(e, n.box.lower[i]).pullback(a, m));
            e[i] = -1.0;
            if (std::isfinite(n.box.upper[i]))
                faces.push_back(halfspace(e, -n.box.upper[i]).pullback(a, m));
        }
        if (faces.empty())
            return all(n.dim);
        return intersection(std::move(faces));
    }
    case Kind::complement:
        return complement(n.parts.front().pullback(a, m));
    case Kind::intersection: {
        std::vector<Region> parts;
        parts.reserve(n.parts.size());
        for (const Region& p : n.parts)
            parts.push_back(p.pullback(a, m));
        return intersection(std::move(parts));
    }
    }
    return *this;
}

double parse_extended_real(const nlohmann::json& j)
{
    if (j.is_number())
        return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf" || s == "infinity")
            return kInf;
        if (s == "-inf" || s == "-infinity")
            return -kInf;
    }
    throw InvalidArgument("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

nlohmann::json extended_real_to_json(double v)
{
    if (v == kInf)
        return "inf";
    if (v == -kInf)
        return "-inf";
    return v;
}

Region Region::from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InvalidArgument("region must be an object with a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "all")
        return all(j.value("dim", std::size_t{1}));
    if (kind == "box") {
        if (!j.contains("box") || !j["box"].is_array() || j["box"].empty())
            throw InvalidArgument("box region needs \"box\": [[lo, hi], ...]");
        Box b;
        for (const auto& axis : j["box"]) {
            if (!axis.is_array() || axis.size() != 2)
                throw InvalidArgument("each box axis must be [lo, hi]");
            b.lower.push_back(parse_extended_real(axis[0]));
            b.upper.push_back(parse_extended_real(axis[1]));
        }
        return box(std::move(b));
    }
    if (kind == "halfspace") {
        if (!j.contains("normal") || !j["normal"].is_array())
            throw InvalidArgument("halfspace region needs \"normal\"");
        return halfspace(j["normal"].get<std::vector<double>>(), j.value("offset", 0.0));
    }
    if (kind == "complement") {
        if (!j.contains("of"))
            throw InvalidArgument("complement region needs \"of\"");
        return complement(from_json(j["of"]));
    }
    if (kind == "intersection") {
        if (!j.contains("parts") || !j["parts"].is_array())
            throw InvalidArgument("intersection region needs \"parts\"");
        std::vector<Region> parts;
        for (const auto& p : j["parts"])
            parts.push_back(from_json(p));
        return intersection(std::move(parts));
    }
    throw InvalidArgument("unknown region kind \"" + kind + "\"");
}

Region Region::parse(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(std::string("malformed region document: ") + e.what());
    }
    return from_json(j);
}

nlohmann::json Region::to_json() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::all:
        return {{"kind", "all"}, {"dim", n.dim}};
    case Kind::box: {
        nlohmann::json axes = nlohmann::json::array();
        for (std::size_t i = 0; i < n.dim; ++i)
            axes.push_back({extended_real_to_json(n.box.lower[i]), extended_real_to_json(n.box.upper[i])});
        return {{"kind", "box"}, {"box", axes}};
    }
    case Kind::halfspace:
        return {{"kind", "halfspace"}, {"normal", n.normal}, {"offset", n.offset}};
    case Kind::complement:
        return {{"kind", "complement"}, {"of", n.parts.front().to_json()}};
    case Kind::intersection: {
        nlohmann::json parts = nlohmann::json::array();
        for (const Region& p : n.parts)
            parts.push_back(p.to_json());
        return {{"kind", "intersection"}, {"parts", parts}};
    }
    }
    return {};
}

std::string Region::describe() const
{
    const Node& n = *node_;
    std::ostringstream os;
    switch (n.kind) {
    case Kind::all:
        os << "R^" << n.dim;
        break;
    case Kind::box:
        for (std::size_t i = 0; i < n.dim; ++i)
            os << (i ? "x" : "") << '[' << n.box.lower[i] << ',' << n.box.upper[i] << ']';
        break;
    case Kind::halfspace:
        os << "{x: (";
        for (std::size_t i = 0; i < n.dim; ++i)
            os << (i ? "," : "") << n.normal[i];
        os << ").x >= " << n.offset << '}';
        break;
    case Kind::complement:
        os << "not(" << n.parts.front().describe() << ')';
        break;
    case Kind::intersection:
        for (std::size_t i = 0; i < n.parts.size(); ++i)
            os << (i ? " & " : "") << '(' << n.parts[i].describe() << ')';
        break;
    }
    return os.str();
}

} // namespace lpq
