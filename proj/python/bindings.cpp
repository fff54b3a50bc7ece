#include "orbispace/jsonio.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace orbi;

namespace {

Int int_from_py(py::handle h) { return Int(py::str(h).cast<std::string>()); }

py::int_ int_to_py(const Int& v) { return py::int_(py::str(v.str())); }

ws::WeightMultiset weights_from_py(const std::vector<std::vector<py::int_>>& rows) {
    std::vector<std::vector<Int>> items;
    for (const auto& row : rows) {
        std::vector<Int> item;
        for (const auto& v : row) item.push_back(int_from_py(v));
        items.push_back(std::move(item));
    }
    std::size_t m = items.empty() ? 0 : items[0].size();
    return ws::WeightMultiset::of(m, std::move(items));
}

lin::RatMatrix matrix_from_py(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<Rat>> conv;
    for (const auto& row : rows) {
        std::vector<Rat> r;
        for (const auto& v : row) r.push_back(parse_rat(v));
        conv.push_back(std::move(r));
    }
    return lin::RatMatrix::from_rows(conv);
}

std::vector<std::vector<std::string>> matrix_to_py(const lin::RatMatrix& m) {
    std::vector<std::vector<std::string>> rows(m.rows(), std::vector<std::string>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = rat_str(m.at(i, j));
    return rows;
}

lin::IntMat int_matrix_from_py(const std::vector<std::vector<py::int_>>& rows) {
    std::size_t r = rows.size(), c = r == 0 ? 0 : rows[0].size();
    lin::IntMat m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = int_from_py(rows[i][j]);
    }
    return m;
}

py::list int_matrix_to_py(const lin::IntMat& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows; ++i) {
        py::list row;
        for (std::size_t j = 0; j < m.cols; ++j) row.append(int_to_py(m.at(i, j)));
        rows.append(row);
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact decision engine for orbit spaces of compact monomial group actions";

    py::register_exception<Error>(m, "EngineError");

    m.def(
        "is_q_stable",
        [](const std::vector<std::vector<py::int_>>& weights, std::size_t q) {
            return ws::is_q_stable(weights_from_py(weights), q);
        },
        py::arg("weights"), py::arg("q"),
        "True iff the span survives removal of any q items");

    m.def(
        "equivalence_classes",
        [](const std::vector<std::vector<py::int_>>& weights) {
            return ws::equivalence_classes(weights_from_py(weights));
        },
        py::arg("weights"));

    m.def(
        "indecomposable_components",
        [](const std::vector<std::vector<py::int_>>& weights) {
            auto d = ws::indecomposable_components(weights_from_py(weights));
            return py::make_tuple(d.blocks, d.zero_bucket);
        },
        py::arg("weights"));

    m.def(
        "class_relation",
        [](const std::vector<std::vector<py::int_>>& weights,
           const std::vector<std::size_t>& indices) {
            auto rel = ws::class_relation(weights_from_py(weights), indices);
            py::dict out;
            out["indices"] = rel.class_indices;
            out["flips"] = rel.sign_flips;
            py::list exps, comb;
            for (const auto& a : rel.coefficients) exps.append(int_to_py(a));
            for (const auto& x : rel.combination) comb.append(int_to_py(x));
            out["exponents"] = exps;
            out["combination"] = comb;
            return out;
        },
        py::arg("weights"), py::arg("class_indices"));

    m.def(
        "rref",
        [](const std::vector<std::vector<std::string>>& rows) {
            auto r = lin::rref(matrix_from_py(rows));
            return py::make_tuple(matrix_to_py(r.reduced), r.pivots);
        },
        py::arg("matrix"), "Reduced row-echelon form and pivot columns, entries as strings");

    m.def(
        "kernel_basis",
        [](const std::vector<std::vector<std::string>>& rows) {
            auto basis = lin::kernel_basis(matrix_from_py(rows));
            std::vector<std::vector<std::string>> out;
            for (const auto& v : basis) {
                std::vector<std::string> row;
                for (const auto& x : v) row.push_back(rat_str(x));
                out.push_back(std::move(row));
            }
            return out;
        },
        py::arg("matrix"));

    m.def(
        "smith_normal_form",
        [](const std::vector<std::vector<py::int_>>& rows) {
            auto r = lin::smith_normal_form(int_matrix_from_py(rows));
            return py::make_tuple(int_matrix_to_py(r.u), int_matrix_to_py(r.s),
                                  int_matrix_to_py(r.v));
        },
        py::arg("matrix"), "U, S, V with U*M*V = S diagonal and divisibility chain");

    m.def(
        "integer_kernel",
        [](const std::vector<std::vector<py::int_>>& rows) {
            auto lat = lin::integer_kernel(int_matrix_from_py(rows));
            py::list basis;
            for (const auto& v : lat.basis) {
                py::list row;
                for (const auto& x : v) row.append(int_to_py(x));
                basis.append(row);
            }
            return basis;
        },
        py::arg("matrix"), "HNF basis of the saturated left integer kernel");

    m.def(
        "run",
        [](const std::string& command, const std::string& document, std::size_t q,
           std::optional<std::size_t> trials, std::optional<std::uint64_t> seed,
           std::optional<std::size_t> cap, std::size_t max_lines) {
            io::CommandOptions opts;
            opts.q = q;
            opts.trials = trials;
            opts.seed = seed;
            opts.cap = cap;
            opts.max_lines = max_lines;
            auto result = io::run_command(command, document, opts);
            return py::make_tuple(result.report.dump(), result.exit_code);
        },
        py::arg("command"), py::arg("document"), py::arg("q") = 2,
        py::arg("trials") = std::nullopt, py::arg("seed") = std::nullopt,
        py::arg("cap") = std::nullopt, py::arg("max_lines") = 24,
        "Run a CLI command on a JSON document; returns (report_json, exit_code)");
}
