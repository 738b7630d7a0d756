#include "qkdbound/serialize.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qkdbound {

using nlohmann::json;

json to_json(const HermitianMatrix& m) {
    const Eigen::Index d = m.dim();
    std::vector<double> re, im;
    re.reserve(d * d);
    im.reserve(d * d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            re.push_back(m.mat()(i, j).real());
            im.push_back(m.mat()(i, j).imag());
        }
    return json{{"dim", d}, {"re", re}, {"im", im}};
}

HermitianMatrix hermitian_from_json(const json& j) {
    const Eigen::Index d = j.at("dim").get<Eigen::Index>();
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im;
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    else im.assign(re.size(), 0.0);
    if (d < 1 || re.size() != static_cast<std::size_t>(d * d) || im.size() != re.size())
        throw InvalidArgument("matrix JSON: re/im length must equal dim^2");
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j2 = 0; j2 < d; ++j2) {
            const std::size_t k = static_cast<std::size_t>(i * d + j2);
            m(i, j2) = Complex(re[k], im[k]);
        }
    return HermitianMatrix(m);
}

json to_json(const JointDistribution& p) {
    return json{{"shape", p.shape()}, {"probs", p.probs()}};
}

JointDistribution distribution_from_json(const json& j) {
    return JointDistribution(j.at("shape").get<std::vector<int>>(),
                             j.at("probs").get<std::vector<double>>());
}

json to_json(const Povm& p) {
    json elements = json::array();
    for (const auto& e : p.elements()) elements.push_back(to_json(e));
    return json{{"dim", p.dim()}, {"elements", elements}, {"labels", p.labels()}};
}

Povm povm_from_json(const json& j) {
    std::vector<HermitianMatrix> elements;
    for (const auto& e : j.at("elements")) elements.push_back(hermitian_from_json(e));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
    } else {
        for (std::size_t i = 0; i < elements.size(); ++i) labels.push_back(std::to_string(i));
    }
    return Povm(std::move(elements), std::move(labels));
}

json to_json(const DetectorSpec& d) {
    return json{{"dark_total", d.dark_total},
                {"dark_split", d.dark_split},
                {"efficiencies", d.efficiencies}};
}

DetectorSpec detector_from_json(const json& j) {
    DetectorSpec d;
    d.dark_total = j.value("dark_total", 0.0);
    if (j.contains("dark_split")) d.dark_split = j.at("dark_split").get<std::vector<double>>();
    if (j.contains("efficiencies"))
        d.efficiencies = j.at("efficiencies").get<std::vector<double>>();
    return d;
}

EquivalenceClassSpec class_spec_from_json(const json& j) {
    return EquivalenceClassSpec{povm_from_json(j.at("alice_povm")),
                                povm_from_json(j.at("bob_povm")),
                                distribution_from_json(j.at("observed"))};
}

json to_json(const BsaResult& r) {
    json out{{"lambda_max", r.lambda_max},
             {"rho_star", to_json(r.rho_star.herm())},
             {"duality_gap", r.duality_gap},
             {"iterations", r.iterations}};
    if (r.sigma_sep) out["sigma_sep"] = to_json(r.sigma_sep->herm());
    if (r.rho_ent) out["rho_ent"] = to_json(r.rho_ent->herm());
    return out;
}

json to_json(const BoundReport& r) {
    json out{{"e", r.e},
             {"lambda_max", r.lambda_max},
             {"i_ent", r.i_ent},
             {"upper_bound", r.upper_bound},
             {"mutual_info", r.mutual_info},
             {"detector", to_json(r.detector)}};
    if (r.e_r) out["e_r"] = *r.e_r;
    if (!r.error.empty()) out["error"] = r.error;
    return out;
}

json reports_to_json(const std::vector<BoundReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) out.push_back(to_json(r));
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string reports_to_csv(const std::vector<BoundReport>& reports) {
    std::string out = "e,lambda_max,i_ent,upper_bound,mutual_info,e_r\n";
    for (const auto& r : reports) {
        if (!r.error.empty()) continue;
        out += format_double(r.e);
        out += ',';
        out += format_double(r.lambda_max);
        out += ',';
        out += format_double(r.i_ent);
        out += ',';
        out += format_double(r.upper_bound);
        out += ',';
        out += format_double(r.mutual_info);
        out += ',';
        if (r.e_r) out += format_double(*r.e_r);
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw InvalidArgument("cannot open output file: " + tmp.string());
        os << content;
        if (!os.flush()) throw NumericalFailure("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw NumericalFailure("failed to move output into place: " + target.string());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidArgument("cannot read input file: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace qkdbound
