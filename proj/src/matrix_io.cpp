#include "steinlab/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace steinlab {

namespace {

using nlohmann::json;

Matrix parse_matrix(const json& j, const std::string& where) {
    if (!j.contains("dim") || !j.contains("re"))
        throw ConfigError("matrix_io", "read", where + ": need fields dim, re (im optional)");
    const int dim = j.at("dim").get<int>();
    if (dim < 1) throw ConfigError("matrix_io", "read", where + ": dim must be >= 1");
    const auto& re = j.at("re");
    const bool has_im = j.contains("im");
    if (static_cast<int>(re.size()) != dim)
        throw ConfigError("matrix_io", "read", where + ": re has wrong row count");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const auto& row = re.at(i);
        if (static_cast<int>(row.size()) != dim)
            throw ConfigError("matrix_io", "read", where + ": re row " + std::to_string(i) +
                                                       " has wrong length");
        for (int k = 0; k < dim; ++k) m(i, k) = Complex(row.at(k).get<double>(), 0.0);
    }
    if (has_im) {
        const auto& im = j.at("im");
        if (static_cast<int>(im.size()) != dim)
            throw ConfigError("matrix_io", "read", where + ": im has wrong row count");
        for (int i = 0; i < dim; ++i) {
            const auto& row = im.at(i);
            if (static_cast<int>(row.size()) != dim)
                throw ConfigError("matrix_io", "read",
                                  where + ": im row " + std::to_string(i) + " has wrong length");
            for (int k = 0; k < dim; ++k) m(i, k) += Complex(0.0, row.at(k).get<double>());
        }
    }
    return m;
}

json matrix_to_json(const Matrix& m) {
    const int dim = static_cast<int>(m.rows());
    json re = json::array(), im = json::array();
    for (int i = 0; i < dim; ++i) {
        json rrow = json::array(), irow = json::array();
        for (int k = 0; k < dim; ++k) {
            rrow.push_back(m(i, k).real());
            irow.push_back(m(i, k).imag());
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return json{{"dim", dim}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("matrix_io", "read", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("matrix_io", "read", path + ": " + e.what());
    }
    return j;
}

}  // namespace

HermitianOperator hermitian_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("matrix_io", "read", std::string("inline matrix: ") + e.what());
    }
    return HermitianOperator(parse_matrix(j, "inline matrix"));
}

std::string hermitian_to_json_text(const HermitianOperator& op) {
    return matrix_to_json(op.matrix()).dump();
}

HermitianOperator read_hermitian(const std::string& path) {
    return HermitianOperator(parse_matrix(load_file(path), path));
}

DensityOperator read_density(const std::string& path) {
    return DensityOperator(read_hermitian(path));
}

void write_hermitian(const std::string& path, const HermitianOperator& op) {
    std::ofstream out(path);
    if (!out) throw ConfigError("matrix_io", "write", "cannot open " + path);
    out << matrix_to_json(op.matrix()).dump(2) << "\n";
}

}  // namespace steinlab
