#include "isokl/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace isokl {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string cmat_to_string(const Mat& m) {
    std::ostringstream os;
    os << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols() << ", \"entries\": [";
    bool first = true;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!first) os << ", ";
            first = false;
            os << "[" << fmt_double(m(i, j).real()) << ", " << fmt_double(m(i, j).imag()) << "]";
        }
    }
    os << "]}\n";
    return os.str();
}

Mat cmat_from_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", std::string("invalid cmat JSON: ") + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw Error("ParseError", "cmat JSON missing rows/cols/entries");
    Eigen::Index rows = j["rows"].get<Eigen::Index>();
    Eigen::Index cols = j["cols"].get<Eigen::Index>();
    const auto& entries = j["entries"];
    if (rows <= 0 || cols <= 0 || static_cast<Eigen::Index>(entries.size()) != rows * cols)
        throw Error("ParseError", "cmat entries length does not match rows*cols");
    Mat m(rows, cols);
    Eigen::Index idx = 0;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2)
            throw Error("ParseError", "cmat entry is not a [re, im] pair");
        m(idx / cols, idx % cols) = Complex(e[0].get<double>(), e[1].get<double>());
        ++idx;
    }
    if (!all_finite(m)) throw Error("ParseError", "cmat contains non-finite entries");
    return m;
}

Mat read_cmat(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return cmat_from_string(buf.str());
}

void write_cmat(const std::filesystem::path& path, const Mat& m) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path.string());
    out << cmat_to_string(m);
}

}  // namespace isokl
