#ifndef MARCLAB_JOINT_PMF_HPP
#define MARCLAB_JOINT_PMF_HPP

#include <span>
#include <string>
#include <vector>

namespace marclab {

/// A named finite random variable: symbols are 0 .. alphabet_size-1.
struct VariableId {
    std::string name;
    int alphabet_size = 0;
};

class JointPmf;

/// Transition law p(outputs | given). The kernel tensor is row-major over
/// (given..., outputs...) with the last output variable fastest. Every
/// given-row must sum to one within 1e-12.
class ConditionalPmf {
public:
    ConditionalPmf(std::vector<VariableId> given, std::vector<VariableId> outputs,
                   std::vector<double> kernel);

    /// Marginal distribution wrapped as a kernel with no conditioning.
    static ConditionalPmf marginal(std::vector<VariableId> outputs, std::vector<double> weights);

    /// Deterministic kernel: output = fn(given assignment). Single output variable.
    static ConditionalPmf deterministic(std::vector<VariableId> given, VariableId output,
                                        const std::vector<int>& table);

    const std::vector<VariableId>& given() const { return given_; }
    const std::vector<VariableId>& outputs() const { return outputs_; }
    const std::vector<double>& kernel() const { return kernel_; }
    std::size_t given_cells() const { return given_cells_; }
    std::size_t output_cells() const { return output_cells_; }

    double value(std::span<const int> given_sym, std::span<const int> output_sym) const;

private:
    std::vector<VariableId> given_;
    std::vector<VariableId> outputs_;
    std::vector<double> kernel_;
    std::size_t given_cells_ = 1;
    std::size_t output_cells_ = 1;
};

/// Exact joint distribution over named finite variables. Weights are stored
/// dense, row-major with the last-listed variable fastest. Immutable after
/// construction; all operations return new values.
class JointPmf {
public:
    JointPmf(std::vector<VariableId> variables, std::vector<double> weights);

    /// Renormalizes before constructing; rejects inputs whose total mass
    /// deviates from one by more than `slack`.
    static JointPmf normalized(std::vector<VariableId> variables, std::vector<double> weights,
                               double slack = 1e-9);

    static JointPmf uniform(std::vector<VariableId> variables);

    /// Joint distribution of a topologically ordered factor list (each
    /// factor's conditioning variables must be produced by earlier factors).
    /// Variable order is first appearance unless `order` names all variables.
    static JointPmf from_factors(std::span<const ConditionalPmf> factors,
                                 const std::vector<std::string>& order = {});

    const std::vector<VariableId>& variables() const { return vars_; }
    const std::vector<double>& weights() const { return w_; }
    std::size_t cell_count() const { return w_.size(); }

    bool has_variable(const std::string& name) const;
    int axis_of(const std::string& name) const;  // throws on unknown name
    const VariableId& variable(const std::string& name) const;

    double weight_at(std::span<const int> assignment) const;
    std::size_t flat_index(std::span<const int> assignment) const;
    void unflatten(std::size_t flat, std::span<int> assignment_out) const;

    /// Sums out every axis not named in `keep`; surviving variables keep
    /// their original relative order.
    JointPmf marginalize(const std::vector<std::string>& keep) const;

    /// Same distribution with axes permuted to the given name order.
    JointPmf reorder(const std::vector<std::string>& order) const;

    /// p(outputs | given) extracted from this joint. Rows with zero
    /// conditioning mass are filled uniformly.
    ConditionalPmf conditional(const std::vector<std::string>& outputs,
                               const std::vector<std::string>& given) const;

    /// Total-variation distance; both pmfs must hold the same variables
    /// (any order).
    double total_variation(const JointPmf& other) const;

private:
    JointPmf() = default;
    std::vector<VariableId> vars_;
    std::vector<double> w_;
    std::vector<std::size_t> strides_;
    void build_strides();
};

/// Kahan-compensated sum; keeps mass checks meaningful on large tensors.
double stable_sum(std::span<const double> values);

} // namespace marclab

#endif
