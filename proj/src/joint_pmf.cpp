#include "marclab/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace marclab {

namespace {

constexpr double kMassTolerance = 1e-12;

std::size_t checked_cell_count(const std::vector<VariableId>& vars) {
    std::size_t cells = 1;
    std::unordered_set<std::string> seen;
    for (const auto& v : vars) {
        if (v.alphabet_size < 1)
            throw std::invalid_argument("variable '" + v.name + "' has alphabet_size < 1");
        if (!seen.insert(v.name).second)
            throw std::invalid_argument("duplicate variable name '" + v.name + "'");
        const std::size_t next = cells * static_cast<std::size_t>(v.alphabet_size);
        if (next / static_cast<std::size_t>(v.alphabet_size) != cells)
            throw std::invalid_argument("product alphabet overflows size_t");
        cells = next;
    }
    return cells;
}

void check_nonnegative(std::vector<double>& w) {
    for (auto& x : w) {
        if (x < 0.0) {
            if (x < -1e-15) throw std::invalid_argument("negative weight in pmf tensor");
            x = 0.0;
        }
    }
}

} // namespace

double stable_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// ---------------------------------------------------------------------------
// ConditionalPmf

ConditionalPmf::ConditionalPmf(std::vector<VariableId> given, std::vector<VariableId> outputs,
                               std::vector<double> kernel)
    : given_(std::move(given)), outputs_(std::move(outputs)), kernel_(std::move(kernel)) {
    std::vector<VariableId> all = given_;
    all.insert(all.end(), outputs_.begin(), outputs_.end());
    const std::size_t cells = checked_cell_count(all);
    if (outputs_.empty()) throw std::invalid_argument("kernel needs at least one output variable");
    if (kernel_.size() != cells)
        throw std::invalid_argument("kernel size does not match (given, outputs) shape");
    check_nonnegative(kernel_);
    given_cells_ = 1;
    for (const auto& v : given_) given_cells_ *= static_cast<std::size_t>(v.alphabet_size);
    output_cells_ = cells / given_cells_;
    for (std::size_t g = 0; g < given_cells_; ++g) {
        const double row = stable_sum(std::span(kernel_).subspan(g * output_cells_, output_cells_));
        if (std::fabs(row - 1.0) > kMassTolerance)
            throw std::invalid_argument("kernel row " + std::to_string(g) +
                                        " sums to " + std::to_string(row) + ", expected 1");
    }
}

ConditionalPmf ConditionalPmf::marginal(std::vector<VariableId> outputs, std::vector<double> weights) {
    return ConditionalPmf({}, std::move(outputs), std::move(weights));
}

ConditionalPmf ConditionalPmf::deterministic(std::vector<VariableId> given, VariableId output,
                                             const std::vector<int>& table) {
    std::size_t rows = 1;
    for (const auto& v : given) rows *= static_cast<std::size_t>(v.alphabet_size);
    if (table.size() != rows)
        throw std::invalid_argument("deterministic kernel table size mismatch");
    std::vector<double> kernel(rows * static_cast<std::size_t>(output.alphabet_size), 0.0);
    for (std::size_t g = 0; g < rows; ++g) {
        if (table[g] < 0 || table[g] >= output.alphabet_size)
            throw std::invalid_argument("deterministic kernel value out of range");
        kernel[g * output.alphabet_size + table[g]] = 1.0;
    }
    return ConditionalPmf(std::move(given), {std::move(output)}, std::move(kernel));
}

double ConditionalPmf::value(std::span<const int> given_sym, std::span<const int> output_sym) const {
    if (given_sym.size() != given_.size() || output_sym.size() != outputs_.size())
        throw std::invalid_argument("kernel lookup arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < given_.size(); ++i)
        idx = idx * given_[i].alphabet_size + given_sym[i];
    for (std::size_t i = 0; i < outputs_.size(); ++i)
        idx = idx * outputs_[i].alphabet_size + output_sym[i];
    return kernel_[idx];
}

// ---------------------------------------------------------------------------
// JointPmf

void JointPmf::build_strides() {
    strides_.assign(vars_.size(), 1);
    for (std::size_t i = vars_.size(); i-- > 1;)
        strides_[i - 1] = strides_[i] * static_cast<std::size_t>(vars_[i].alphabet_size);
}

JointPmf::JointPmf(std::vector<VariableId> variables, std::vector<double> weights)
    : vars_(std::move(variables)), w_(std::move(weights)) {
    const std::size_t cells = checked_cell_count(vars_);
    if (w_.size() != cells)
        throw std::invalid_argument("weight tensor size does not match product alphabet");
    check_nonnegative(w_);
    const double mass = stable_sum(w_);
    if (std::fabs(mass - 1.0) > kMassTolerance)
        throw std::invalid_argument("pmf mass is " + std::to_string(mass) +
                                    ", outside tolerance of 1");
    build_strides();
}

JointPmf JointPmf::normalized(std::vector<VariableId> variables, std::vector<double> weights,
                              double slack) {
    check_nonnegative(weights);
    const double mass = stable_sum(weights);
    if (!(mass > 0.0) || std::fabs(mass - 1.0) > slack)
        throw std::invalid_argument("pmf mass " + std::to_string(mass) +
                                    " is outside the normalization slack");
    for (auto& x : weights) x /= mass;
    return JointPmf(std::move(variables), std::move(weights));
}

JointPmf JointPmf::uniform(std::vector<VariableId> variables) {
    const std::size_t cells = checked_cell_count(variables);
    return JointPmf(std::move(variables), std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
}

bool JointPmf::has_variable(const std::string& name) const {
    for (const auto& v : vars_)
        if (v.name == name) return true;
    return false;
}

int JointPmf::axis_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown variable '" + name + "'");
}

const VariableId& JointPmf::variable(const std::string& name) const {
    return vars_[static_cast<std::size_t>(axis_of(name))];
}

std::size_t JointPmf::flat_index(std::span<const int> assignment) const {
    if (assignment.size() != vars_.size())
        throw std::invalid_argument("assignment arity mismatch");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (assignment[i] < 0 || assignment[i] >= vars_[i].alphabet_size)
            throw std::out_of_range("symbol out of alphabet for '" + vars_[i].name + "'");
        idx += strides_[i] * static_cast<std::size_t>(assignment[i]);
    }
    return idx;
}

void JointPmf::unflatten(std::size_t flat, std::span<int> assignment_out) const {
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        assignment_out[i] = static_cast<int>(flat / strides_[i]);
        flat %= strides_[i];
    }
}

double JointPmf::weight_at(std::span<const int> assignment) const {
    return w_[flat_index(assignment)];
}

JointPmf JointPmf::marginalize(const std::vector<std::string>& keep) const {
    std::unordered_set<std::string> keep_set;
    for (const auto& name : keep) {
        axis_of(name);  // validates
        keep_set.insert(name);
    }
    std::vector<int> kept_axes;
    std::vector<VariableId> kept_vars;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (keep_set.count(vars_[i].name)) {
            kept_axes.push_back(static_cast<int>(i));
            kept_vars.push_back(vars_[i]);
        }
    }
    std::size_t out_cells = 1;
    for (const auto& v : kept_vars) out_cells *= static_cast<std::size_t>(v.alphabet_size);
    std::vector<double> out(out_cells, 0.0);

    std::vector<int> sym(vars_.size());
    for (std::size_t flat = 0; flat < w_.size(); ++flat) {
        if (w_[flat] == 0.0) continue;
        unflatten(flat, sym);
        std::size_t idx = 0;
        for (int axis : kept_axes)
            idx = idx * vars_[axis].alphabet_size + sym[axis];
        out[idx] += w_[flat];
    }
    JointPmf result;
    result.vars_ = std::move(kept_vars);
    result.w_ = std::move(out);
    result.build_strides();
    return result;
}

JointPmf JointPmf::reorder(const std::vector<std::string>& order) const {
    if (order.size() != vars_.size())
        throw std::invalid_argument("reorder must name every variable exactly once");
    std::vector<int> axes;
    std::vector<VariableId> new_vars;
    std::unordered_set<std::string> seen;
    for (const auto& name : order) {
        if (!seen.insert(name).second)
            throw std::invalid_argument("duplicate name in reorder: '" + name + "'");
        const int a = axis_of(name);
        axes.push_back(a);
        new_vars.push_back(vars_[a]);
    }
    std::vector<double> out(w_.size());
    std::vector<int> sym(vars_.size());
    for (std::size_t flat = 0; flat < w_.size(); ++flat) {
        unflatten(flat, sym);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < axes.size(); ++i)
            idx = idx * new_vars[i].alphabet_size + sym[axes[i]];
        out[idx] = w_[flat];
    }
    JointPmf result;
    result.vars_ = std::move(new_vars);
    result.w_ = std::move(out);
    result.build_strides();
    return result;
}

ConditionalPmf JointPmf::conditional(const std::vector<std::string>& outputs,
                                     const std::vector<std::string>& given) const {
    std::vector<std::string> scope = given;
    scope.insert(scope.end(), outputs.begin(), outputs.end());
    // marginalize preserves source order, so reorder into (given, outputs).
    const JointPmf sub = marginalize(scope).reorder(scope);

    std::vector<VariableId> gvars(sub.vars_.begin(), sub.vars_.begin() + given.size());
    std::vector<VariableId> ovars(sub.vars_.begin() + given.size(), sub.vars_.end());
    std::size_t gcells = 1, ocells = 1;
    for (const auto& v : gvars) gcells *= static_cast<std::size_t>(v.alphabet_size);
    for (const auto& v : ovars) ocells *= static_cast<std::size_t>(v.alphabet_size);

    std::vector<double> kernel(sub.w_);
    for (std::size_t g = 0; g < gcells; ++g) {
        const double mass = stable_sum(std::span(kernel).subspan(g * ocells, ocells));
        if (mass > 0.0) {
            for (std::size_t o = 0; o < ocells; ++o) kernel[g * ocells + o] /= mass;
        } else {
            for (std::size_t o = 0; o < ocells; ++o)
                kernel[g * ocells + o] = 1.0 / static_cast<double>(ocells);
        }
    }
    return ConditionalPmf(std::move(gvars), std::move(ovars), std::move(kernel));
}

double JointPmf::total_variation(const JointPmf& other) const {
    std::vector<std::string> order;
    for (const auto& v : vars_) order.push_back(v.name);
    const JointPmf aligned = other.reorder(order);
    if (aligned.cell_count() != cell_count())
        throw std::invalid_argument("total_variation: shape mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc += std::fabs(w_[i] - aligned.w_[i]);
    return 0.5 * acc;
}

JointPmf JointPmf::from_factors(std::span<const ConditionalPmf> factors,
                                const std::vector<std::string>& order) {
    if (factors.empty()) throw std::invalid_argument("from_factors: empty factor list");

    std::unordered_map<std::string, VariableId> produced;
    std::vector<VariableId> appearance;
    for (const auto& f : factors) {
        for (const auto& g : f.given()) {
            auto it = produced.find(g.name);
            if (it == produced.end())
                throw std::invalid_argument("factor conditions on '" + g.name +
                                            "' before any factor produces it");
            if (it->second.alphabet_size != g.alphabet_size)
                throw std::invalid_argument("alphabet size mismatch for '" + g.name + "'");
        }
        for (const auto& o : f.outputs()) {
            if (produced.count(o.name))
                throw std::invalid_argument("variable '" + o.name + "' produced twice");
            produced.emplace(o.name, o);
            appearance.push_back(o);
        }
    }

    std::vector<VariableId> vars;
    if (order.empty()) {
        vars = appearance;
    } else {
        if (order.size() != appearance.size())
            throw std::invalid_argument("from_factors order must name every variable");
        for (const auto& name : order) {
            auto it = produced.find(name);
            if (it == produced.end())
                throw std::invalid_argument("from_factors order names unknown '" + name + "'");
            vars.push_back(it->second);
        }
    }

    const std::size_t cells = checked_cell_count(vars);
    std::unordered_map<std::string, int> axis;
    for (std::size_t i = 0; i < vars.size(); ++i) axis[vars[i].name] = static_cast<int>(i);

    // Per-factor axis lists, resolved once.
    struct Slots { std::vector<int> given, outputs; };
    std::vector<Slots> slots(factors.size());
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        for (const auto& g : factors[fi].given()) slots[fi].given.push_back(axis.at(g.name));
        for (const auto& o : factors[fi].outputs()) slots[fi].outputs.push_back(axis.at(o.name));
    }

    std::vector<double> w(cells, 1.0);
    std::vector<int> sym(vars.size());
    std::vector<int> gbuf, obuf;
    JointPmf shape;
    shape.vars_ = vars;
    shape.w_.assign(cells, 0.0);
    shape.build_strides();
    for (std::size_t flat = 0; flat < cells; ++flat) {
        shape.unflatten(flat, sym);
        double p = 1.0;
        for (std::size_t fi = 0; fi < factors.size() && p > 0.0; ++fi) {
            gbuf.clear();
            obuf.clear();
            for (int a : slots[fi].given) gbuf.push_back(sym[a]);
            for (int a : slots[fi].outputs) obuf.push_back(sym[a]);
            p *= factors[fi].value(gbuf, obuf);
        }
        w[flat] = p;
    }
    JointPmf result;
    result.vars_ = std::move(vars);
    result.w_ = std::move(w);
    result.build_strides();
    const double mass = stable_sum(result.w_);
    if (std::fabs(mass - 1.0) > 1e-9)
        throw std::invalid_argument("factor product mass " + std::to_string(mass) +
                                    " deviates from 1; inconsistent factors");
    if (mass != 1.0)
        for (auto& x : result.w_) x /= mass;
    return result;
}

} // namespace marclab
