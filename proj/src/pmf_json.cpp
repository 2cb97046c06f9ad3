#include "marclab/pmf_json.hpp"

#include <stdexcept>

namespace marclab {

namespace {

nlohmann::json variables_to_json(const std::vector<VariableId>& vars) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vars) arr.push_back({{"name", v.name}, {"size", v.alphabet_size}});
    return arr;
}

std::vector<VariableId> variables_from_json(const nlohmann::json& arr, const char* field) {
    if (!arr.is_array())
        throw std::invalid_argument(std::string(field) + " must be an array of {name,size}");
    std::vector<VariableId> vars;
    for (const auto& entry : arr) {
        VariableId v;
        if (entry.contains("role"))
            v.name = entry.at("role").get<std::string>();
        else if (entry.contains("name"))
            v.name = entry.at("name").get<std::string>();
        else
            throw std::invalid_argument(std::string(field) + ": variable entry lacks name/role");
        if (!entry.contains("size"))
            throw std::invalid_argument(std::string(field) + ": variable '" + v.name +
                                        "' lacks size");
        v.alphabet_size = entry.at("size").get<int>();
        vars.push_back(std::move(v));
    }
    return vars;
}

std::vector<double> doubles_from_json(const nlohmann::json& arr, const char* field) {
    if (!arr.is_array())
        throw std::invalid_argument(std::string(field) + " must be a numeric array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& x : arr) {
        if (!x.is_number())
            throw std::invalid_argument(std::string(field) + " holds a non-numeric entry");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace

nlohmann::json to_json(const JointPmf& pmf) {
    return {{"variables", variables_to_json(pmf.variables())}, {"weights", pmf.weights()}};
}

nlohmann::json to_json(const ConditionalPmf& kernel) {
    return {{"given", variables_to_json(kernel.given())},
            {"outputs", variables_to_json(kernel.outputs())},
            {"kernel", kernel.kernel()}};
}

JointPmf joint_pmf_from_json(const nlohmann::json& j, double normalize_slack) {
    if (!j.contains("variables")) throw std::invalid_argument("pmf JSON lacks 'variables'");
    if (!j.contains("weights")) throw std::invalid_argument("pmf JSON lacks 'weights'");
    auto vars = variables_from_json(j.at("variables"), "variables");
    auto weights = doubles_from_json(j.at("weights"), "weights");
    if (normalize_slack > 0.0)
        return JointPmf::normalized(std::move(vars), std::move(weights), normalize_slack);
    return JointPmf(std::move(vars), std::move(weights));
}

ConditionalPmf conditional_pmf_from_json(const nlohmann::json& j) {
    if (!j.contains("outputs")) throw std::invalid_argument("kernel JSON lacks 'outputs'");
    if (!j.contains("kernel")) throw std::invalid_argument("kernel JSON lacks 'kernel'");
    std::vector<VariableId> given;
    if (j.contains("given")) given = variables_from_json(j.at("given"), "given");
    auto outputs = variables_from_json(j.at("outputs"), "outputs");
    auto kernel = doubles_from_json(j.at("kernel"), "kernel");
    return ConditionalPmf(std::move(given), std::move(outputs), std::move(kernel));
}

} // namespace marclab
