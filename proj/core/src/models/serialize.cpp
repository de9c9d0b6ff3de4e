#include "fcast/models/serialize.hpp"
#include "fcast/core/errors.hpp"

namespace fcast::models {

namespace {

void check_version(const nlohmann::json& doc, const char* what) {
    if (!doc.is_object() || !doc.contains("format_version")) {
        throw FormatError(std::string(what) + ": missing format_version");
    }
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
        throw FormatError(std::string(what) + ": unsupported format_version " +
                          std::to_string(version));
    }
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& doc) {
    const auto rows = doc.size();
    if (rows == 0) {
        return Eigen::MatrixXd();
    }
    const auto cols = doc.at(0).size();
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (doc.at(i).size() != cols) {
            throw FormatError("model document: ragged tensor rows");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = doc.at(i).at(j).get<double>();
        }
    }
    return m;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& doc) {
    Eigen::VectorXd v(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        v(i) = doc.at(i).get<double>();
    }
    return v;
}

} // namespace

nlohmann::json to_json(const LinearFit& fit, const LagSpec& lags) {
    return nlohmann::json{{"format_version", kModelFormatVersion},
                          {"model", "lagged_linear"},
                          {"lags", lags.lags},
                          {"weights", fit.weights},
                          {"intercept", fit.intercept}};
}

std::pair<LinearFit, LagSpec> linear_fit_from_json(const nlohmann::json& doc) {
    check_version(doc, "lagged_linear");
    LinearFit fit;
    fit.weights = doc.at("weights").get<std::vector<double>>();
    fit.intercept = doc.at("intercept").get<double>();
    LagSpec lags{doc.at("lags").get<std::vector<int>>()};
    lags.validate();
    if (fit.weights.size() != lags.lags.size()) {
        throw FormatError("lagged_linear: weight/lag count mismatch");
    }
    return {fit, lags};
}

nlohmann::json to_json(const GlmFit& fit) {
    return nlohmann::json{{"format_version", kModelFormatVersion},
                          {"model", "glm"},
                          {"intercept", fit.intercept},
                          {"slope", fit.slope},
                          {"iterations", fit.iterations},
                          {"converged", fit.converged}};
}

GlmFit glm_fit_from_json(const nlohmann::json& doc) {
    check_version(doc, "glm");
    GlmFit fit;
    fit.intercept = doc.at("intercept").get<double>();
    fit.slope = doc.at("slope").get<double>();
    fit.iterations = doc.at("iterations").get<int>();
    fit.converged = doc.at("converged").get<bool>();
    return fit;
}

nlohmann::json to_json(const LstmModel& model) {
    const LstmParams& p = model.params;
    return nlohmann::json{
        {"format_version", kModelFormatVersion},
        {"model", "lstm"},
        {"config",
         {{"hidden_size", model.config.hidden_size},
          {"epochs", model.config.epochs},
          {"learning_rate", model.config.learning_rate},
          {"sequence_length", model.config.sequence_length},
          {"batch_size", model.config.batch_size},
          {"seed", model.config.seed},
          {"loss", loss_name(model.config.loss)}}},
        {"standardizer", {{"mean", model.norm.mean}, {"scale", model.norm.scale}}},
        {"tensors",
         {{"w_forget", matrix_to_json(p.w_forget)},
          {"w_input", matrix_to_json(p.w_input)},
          {"w_cell", matrix_to_json(p.w_cell)},
          {"w_output", matrix_to_json(p.w_output)},
          {"b_forget", std::vector<double>(p.b_forget.data(), p.b_forget.data() + p.b_forget.size())},
          {"b_input", std::vector<double>(p.b_input.data(), p.b_input.data() + p.b_input.size())},
          {"b_cell", std::vector<double>(p.b_cell.data(), p.b_cell.data() + p.b_cell.size())},
          {"b_output", std::vector<double>(p.b_output.data(), p.b_output.data() + p.b_output.size())},
          {"w_dense", std::vector<double>(p.w_dense.data(), p.w_dense.data() + p.w_dense.size())},
          {"b_dense", p.b_dense}}},
        {"best_loss", model.best_loss}};
}

LstmModel lstm_model_from_json(const nlohmann::json& doc) {
    check_version(doc, "lstm");
    LstmModel model;
    const auto& config = doc.at("config");
    model.config.hidden_size = config.at("hidden_size").get<int>();
    model.config.epochs = config.at("epochs").get<int>();
    model.config.learning_rate = config.at("learning_rate").get<double>();
    model.config.sequence_length = config.at("sequence_length").get<int>();
    model.config.batch_size = config.at("batch_size").get<int>();
    model.config.seed = config.at("seed").get<std::uint64_t>();
    model.config.loss = loss_from_name(config.at("loss").get<std::string>());

    model.norm.mean = doc.at("standardizer").at("mean").get<double>();
    model.norm.scale = doc.at("standardizer").at("scale").get<double>();

    const auto& tensors = doc.at("tensors");
    LstmParams p;
    p.hidden_size = model.config.hidden_size;
    p.input_size = 1;
    p.w_forget = matrix_from_json(tensors.at("w_forget"));
    p.w_input = matrix_from_json(tensors.at("w_input"));
    p.w_cell = matrix_from_json(tensors.at("w_cell"));
    p.w_output = matrix_from_json(tensors.at("w_output"));
    p.b_forget = vector_from_json(tensors.at("b_forget"));
    p.b_input = vector_from_json(tensors.at("b_input"));
    p.b_cell = vector_from_json(tensors.at("b_cell"));
    p.b_output = vector_from_json(tensors.at("b_output"));
    p.w_dense = vector_from_json(tensors.at("w_dense")).transpose();
    p.b_dense = tensors.at("b_dense").get<double>();
    p.validate();
    model.params = std::move(p);
    model.best_loss = doc.at("best_loss").get<double>();
    return model;
}

} // namespace fcast::models
