#include "denscls/model_io.hpp"

#include "denscls/made.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace denscls {

namespace {

void put(std::ostream& out, double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    out << buffer;
}

void put_row(std::ostream& out, const char* key, const Vector& values) {
    out << key;
    for (Index i = 0; i < values.size(); ++i) {
        out << ' ';
        put(out, values[i]);
    }
    out << '\n';
}

std::string read_token(std::istream& in) {
    std::string token;
    if (!(in >> token)) throw MalformedModel("model record ended unexpectedly");
    return token;
}

void expect(std::istream& in, const std::string& keyword) {
    const std::string token = read_token(in);
    if (token != keyword)
        throw MalformedModel("expected '" + keyword + "', found '" + token + "'");
}

double read_real(std::istream& in) {
    double value;
    if (!(in >> value)) throw MalformedModel("expected a number");
    return value;
}

long read_count(std::istream& in, const char* what, long lo, long hi) {
    long value;
    if (!(in >> value) || value < lo || value > hi)
        throw MalformedModel(std::string("invalid ") + what);
    return value;
}

Vector read_row(std::istream& in, const char* key, Index size) {
    expect(in, key);
    Vector values(size);
    for (Index i = 0; i < size; ++i) values[i] = read_real(in);
    return values;
}

void check_label(const std::string& label) {
    if (label.empty()) throw MalformedModel("class labels must be non-empty");
    for (const char c : label)
        if (std::isspace(static_cast<unsigned char>(c)))
            throw MalformedModel("class labels must not contain whitespace: '" + label + "'");
}

constexpr int kGmmVersion = 1;
constexpr int kMafVersion = 1;
constexpr int kClassifierVersion = 1;

}  // namespace

void save_gmm(std::ostream& out, const GmmModel& model) {
    out << "gmm-model " << kGmmVersion << '\n';
    out << "k " << model.k() << " dim " << model.dim() << '\n';
    out << "reg_epsilon ";
    put(out, model.reg_epsilon);
    out << "\nseed " << model.seed << '\n';
    put_row(out, "weights", model.weights);
    for (int j = 0; j < model.k(); ++j) {
        const auto& comp = model.components[static_cast<std::size_t>(j)];
        out << "component " << j << '\n';
        put_row(out, "mean", comp.mean);
        out << "covariance";
        for (Index r = 0; r < comp.covariance.rows(); ++r)
            for (Index c = 0; c < comp.covariance.cols(); ++c) {
                out << ' ';
                put(out, comp.covariance(r, c));
            }
        out << '\n';
    }
    out << "end gmm-model\n";
}

GmmModel load_gmm(std::istream& in) {
    expect(in, "gmm-model");
    if (read_count(in, "gmm-model version", 1, kGmmVersion) != kGmmVersion)
        throw MalformedModel("unsupported gmm-model version");
    expect(in, "k");
    const long k = read_count(in, "component count", 1, 1000000);
    expect(in, "dim");
    const long d = read_count(in, "dimension", 1, 1000000);

    GmmModel model;
    expect(in, "reg_epsilon");
    model.reg_epsilon = read_real(in);
    expect(in, "seed");
    std::uint64_t seed;
    if (!(in >> seed)) throw MalformedModel("invalid seed");
    model.seed = seed;
    model.weights = read_row(in, "weights", k);

    for (long j = 0; j < k; ++j) {
        expect(in, "component");
        if (read_count(in, "component index", j, j) != j)
            throw MalformedModel("components out of order");
        Vector mean = read_row(in, "mean", d);
        expect(in, "covariance");
        Matrix covariance(d, d);
        for (Index r = 0; r < d; ++r)
            for (Index c = 0; c < d; ++c) covariance(r, c) = read_real(in);
        model.components.push_back(GaussianComponent::make(std::move(mean), std::move(covariance)));
    }
    expect(in, "end");
    expect(in, "gmm-model");
    return model;
}

void save_maf(std::ostream& out, const MafModel& model) {
    out << "maf-model " << kMafVersion << '\n';
    out << "dim " << model.d << " depth " << model.depth() << '\n';
    put_row(out, "scaler_means", model.scaler.means);
    put_row(out, "scaler_stddevs", model.scaler.stddevs);
    for (int l = 0; l < model.depth(); ++l) {
        const MadeNetwork& net = model.layers[static_cast<std::size_t>(l)];
        out << "layer " << l << '\n';
        out << "activation " << (net.activation == Activation::Tanh ? "tanh" : "relu") << '\n';
        out << "scale_clamp ";
        put(out, net.scale_clamp);
        out << '\n';
        out << "hidden_sizes " << net.spec.hidden_sizes.size();
        for (const Index h : net.spec.hidden_sizes) out << ' ' << h;
        out << '\n';
        out << "ordering";
        for (const Index o : net.spec.ordering) out << ' ' << o;
        out << '\n';
        for (std::size_t w = 0; w < net.weights.size(); ++w) {
            out << "weight " << w << " rows " << net.weights[w].rows() << " cols "
                << net.weights[w].cols() << '\n';
            for (Index r = 0; r < net.weights[w].rows(); ++r)
                for (Index c = 0; c < net.weights[w].cols(); ++c) {
                    put(out, net.weights[w](r, c));
                    out << ((c + 1 < net.weights[w].cols()) ? ' ' : '\n');
                }
            put_row(out, "bias", net.biases[w]);
        }
    }
    out << "end maf-model\n";
}

MafModel load_maf(std::istream& in) {
    expect(in, "maf-model");
    if (read_count(in, "maf-model version", 1, kMafVersion) != kMafVersion)
        throw MalformedModel("unsupported maf-model version");
    expect(in, "dim");
    const long d = read_count(in, "dimension", 1, 1000000);
    expect(in, "depth");
    const long depth = read_count(in, "depth", 1, 100000);

    MafModel model;
    model.d = d;
    model.scaler.means = read_row(in, "scaler_means", d);
    model.scaler.stddevs = read_row(in, "scaler_stddevs", d);

    for (long l = 0; l < depth; ++l) {
        expect(in, "layer");
        if (read_count(in, "layer index", l, l) != l)
            throw MalformedModel("layers out of order");
        expect(in, "activation");
        const std::string activation = read_token(in);
        if (activation != "tanh" && activation != "relu")
            throw MalformedModel("unknown activation '" + activation + "'");
        expect(in, "scale_clamp");
        const double clamp = read_real(in);
        expect(in, "hidden_sizes");
        const long hidden_count = read_count(in, "hidden layer count", 0, 1000);
        std::vector<Index> hidden_sizes;
        for (long h = 0; h < hidden_count; ++h)
            hidden_sizes.push_back(read_count(in, "hidden size", 1, 1000000));
        expect(in, "ordering");
        std::vector<Index> ordering;
        for (long i = 0; i < d; ++i) ordering.push_back(read_count(in, "ordering entry", 1, d));

        MadeNetwork net;
        net.spec = build_masks(d, hidden_sizes, ordering);  // validates the ordering
        net.activation = activation == "tanh" ? Activation::Tanh : Activation::Relu;
        net.scale_clamp = clamp;
        for (int w = 0; w < net.spec.num_weight_layers(); ++w) {
            expect(in, "weight");
            read_count(in, "weight index", w, w);
            expect(in, "rows");
            const long rows = read_count(in, "weight rows", 1, 1000000);
            expect(in, "cols");
            const long cols = read_count(in, "weight cols", 1, 1000000);
            if (rows != net.spec.masks[static_cast<std::size_t>(w)].rows() ||
                cols != net.spec.masks[static_cast<std::size_t>(w)].cols())
                throw MalformedModel("weight shape disagrees with the architecture");
            Matrix weight(rows, cols);
            for (Index r = 0; r < rows; ++r)
                for (Index c = 0; c < cols; ++c) weight(r, c) = read_real(in);
            net.weights.push_back(std::move(weight));
            net.biases.push_back(read_row(in, "bias", cols));
        }
        model.layers.push_back(std::move(net));
    }
    expect(in, "end");
    expect(in, "maf-model");
    return model;
}

void save_classifier(std::ostream& out, const GenerativeClassifier& model) {
    out << "denscls-classifier " << kClassifierVersion << '\n';
    out << "kind " << (model.kind == DensityKind::Gmm ? "gmm" : "maf") << '\n';
    out << "dim " << model.d << '\n';
    out << "reject_log_threshold ";
    if (model.reject_log_threshold)
        put(out, *model.reject_log_threshold);
    else
        out << "none";
    out << '\n';
    put_row(out, "scaler_means", model.scaler.means);
    put_row(out, "scaler_stddevs", model.scaler.stddevs);
    out << "classes " << model.prior.num_classes() << '\n';
    for (int c = 0; c < model.prior.num_classes(); ++c) {
        const std::string& label = model.prior.labels[static_cast<std::size_t>(c)];
        check_label(label);
        out << "class " << c << " label " << label << " log_prior ";
        put(out, model.prior.log_priors[c]);
        out << '\n';
        if (model.kind == DensityKind::Gmm)
            save_gmm(out, std::get<GmmModel>(model.densities[static_cast<std::size_t>(c)]));
        else
            save_maf(out, std::get<MafModel>(model.densities[static_cast<std::size_t>(c)]));
    }
    out << "end denscls-classifier\n";
}

GenerativeClassifier load_classifier(std::istream& in) {
    // Tolerate a leading free-form provenance block so tools can stamp
    // their run settings above the record.
    std::string first = read_token(in);
    if (first == "run-header") {
        std::string line;
        while (std::getline(in, line)) {
            while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            if (line == "end run-header") break;
        }
        if (!in) throw MalformedModel("run-header block never ends");
        first = read_token(in);
    }
    if (first != "denscls-classifier")
        throw MalformedModel("expected 'denscls-classifier', found '" + first + "'");
    if (read_count(in, "classifier version", 1, kClassifierVersion) != kClassifierVersion)
        throw MalformedModel("unsupported classifier version");
    GenerativeClassifier model;
    expect(in, "kind");
    const std::string kind = read_token(in);
    if (kind != "gmm" && kind != "maf") throw MalformedModel("unknown kind '" + kind + "'");
    model.kind = kind == "gmm" ? DensityKind::Gmm : DensityKind::Maf;
    expect(in, "dim");
    model.d = read_count(in, "dimension", 1, 1000000);
    expect(in, "reject_log_threshold");
    const std::string threshold = read_token(in);
    if (threshold != "none") {
        try {
            model.reject_log_threshold = std::stod(threshold);
        } catch (const std::exception&) {
            throw MalformedModel("invalid reject_log_threshold '" + threshold + "'");
        }
    }
    model.scaler.means = read_row(in, "scaler_means", model.d);
    model.scaler.stddevs = read_row(in, "scaler_stddevs", model.d);
    expect(in, "classes");
    const long classes = read_count(in, "class count", 1, 1000000);
    model.prior.log_priors.resize(classes);
    for (long c = 0; c < classes; ++c) {
        expect(in, "class");
        read_count(in, "class index", c, c);
        expect(in, "label");
        model.prior.labels.push_back(read_token(in));
        expect(in, "log_prior");
        model.prior.log_priors[c] = read_real(in);
        if (model.kind == DensityKind::Gmm)
            model.densities.emplace_back(load_gmm(in));
        else
            model.densities.emplace_back(load_maf(in));
        if (std::visit([](const auto& density) { return density.dim(); },
                       model.densities.back()) != model.d)
            throw MalformedModel("class density dimension disagrees with the classifier");
    }
    expect(in, "end");
    expect(in, "denscls-classifier");
    return model;
}

void save_classifier_file(const std::string& path, const GenerativeClassifier& model) {
    std::ofstream out(path);
    if (!out) throw MalformedModel("cannot write '" + path + "'");
    save_classifier(out, model);
    if (!out) throw MalformedModel("write to '" + path + "' failed");
}

GenerativeClassifier load_classifier_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedModel("cannot open '" + path + "'");
    return load_classifier(in);
}

}  // namespace denscls
