#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cascadelab/cascadelab.hpp"

namespace py = pybind11;
using namespace cascadelab;

namespace {

MessageLog to_log(const std::vector<MessageRecord>& records) { return MessageLog{records}; }

py::dict fit_dict(const PowerLawFit& f) {
    py::dict d;
    d["alpha"] = f.alpha;
    d["n"] = f.n;
    d["xmin"] = f.xmin;
    d["xmax"] = f.xmax;
    d["method"] = std::string(to_string(f.method));
    return d;
}

}  // namespace

PYBIND11_MODULE(_cascadelab, m) {
    m.doc() = "Spreading-group cascade simulation and message-log analytics";
    m.attr("__version__") = std::string(kVersion);

    auto param_error = py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<InsufficientGroupError>(m, "InsufficientGroupError", param_error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception<InsufficientDataError>(m, "InsufficientDataError", PyExc_RuntimeError);
    py::register_exception<UnknownMessageError>(m, "UnknownMessageError", PyExc_KeyError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Graph>(m, "Graph")
        .def(py::init<std::size_t>(), py::arg("n"))
        .def(py::init([](std::size_t n, const std::vector<Edge>& edges, std::vector<NodeId> group) {
                 return Graph(n, edges, std::move(group));
             }),
             py::arg("n"), py::arg("edges"), py::arg("group") = std::vector<NodeId>{})
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def_property_readonly("group_members", &Graph::group_members)
        .def("degree", &Graph::degree)
        .def("neighbors", [](const Graph& g, NodeId v) {
            const auto s = g.neighbors(v);
            return std::vector<NodeId>(s.begin(), s.end());
        })
        .def("has_edge", &Graph::has_edge)
        .def("edges", &Graph::edges)
        .def("to_edge_list", [](const Graph& g) {
            std::ostringstream os;
            write_edge_list(os, g);
            return os.str();
        })
        .def_static("from_edge_list", [](const std::string& text) {
            std::istringstream is(text);
            return read_edge_list(is);
        })
        .def(py::self == py::self)
        .def("__repr__", [](const Graph& g) {
            return "<Graph n=" + std::to_string(g.node_count()) + " edges=" + std::to_string(g.edge_count()) +
                   " group=" + std::to_string(g.group_members().size()) + ">";
        });

    m.def(
        "generate_network",
        [](std::size_t n, std::size_t m_attach, double r, double q_intra, std::uint64_t seed) {
            GenParams p{n, m_attach, r, q_intra, seed};
            py::gil_scoped_release release;
            return generate_network(p);
        },
        py::arg("n"), py::arg("m_attach") = 2, py::arg("r") = 0.0, py::arg("q_intra") = 0.1, py::arg("seed") = 0);

    m.def(
        "eigenvector_centrality",
        [](const Graph& g, double tol, std::size_t max_iter) {
            return eigenvector_centrality(g, CentralityOptions{tol, max_iter});
        },
        py::arg("graph"), py::arg("tol") = 1e-8, py::arg("max_iter") = 1000);
    m.def("top_k", &top_k, py::arg("scores"), py::arg("k"));

    m.def("decay_schedule", &decay_schedule, py::arg("p0"), py::arg("c"), py::arg("p_floor") = 1e-6);

    py::class_<ExposureEvent>(m, "ExposureEvent")
        .def_readonly("step", &ExposureEvent::step)
        .def_property_readonly("source",
                               [](const ExposureEvent& e) -> py::object {
                                   if (e.is_seed()) return py::none();
                                   return py::int_(e.source);
                               })
        .def_readonly("target", &ExposureEvent::target)
        .def_readonly("root", &ExposureEvent::root)
        .def("__repr__", [](const ExposureEvent& e) {
            return "<ExposureEvent step=" + std::to_string(e.step) + " target=" + std::to_string(e.target) + ">";
        });

    py::class_<CascadeTrace>(m, "CascadeTrace")
        .def_readonly("events", &CascadeTrace::events)
        .def_readonly("final_step", &CascadeTrace::final_step)
        .def_readonly("exposed_count", &CascadeTrace::exposed_count)
        .def_readonly("truncated", &CascadeTrace::truncated);

    m.def(
        "simulate",
        [](const Graph& g, double p0, double c, std::size_t seed_count, const std::string& policy,
           std::uint64_t seed, double p_floor, std::size_t max_steps, const std::string& stop_rule) {
            CascadeParams p;
            p.p0 = p0;
            p.c = c;
            p.seed_count = seed_count;
            p.policy = parse_policy(policy);
            p.rng_seed = seed;
            p.p_floor = p_floor;
            p.max_steps = max_steps;
            p.stop_rule = parse_stop_rule(stop_rule);
            py::gil_scoped_release release;
            return simulate(g, p);
        },
        py::arg("graph"), py::arg("p0") = 0.05, py::arg("c") = 3.0, py::arg("seed_count") = 25,
        py::arg("policy") = "random", py::arg("seed") = 0, py::arg("p_floor") = 1e-6, py::arg("max_steps") = 10000,
        py::arg("stop_rule") = "exhaustion");

    m.def(
        "run_sweep",
        [](std::size_t n, std::vector<double> ratios, std::vector<std::size_t> seed_counts,
           std::vector<double> p0_values, std::vector<double> c_values, std::size_t replicates, std::uint64_t seed,
           std::size_t jobs, bool paper_grid) {
            SweepGrid grid = paper_grid ? SweepGrid::paper_grid() : SweepGrid{};
            if (!paper_grid) {
                grid.n = n;
                grid.group_ratios = std::move(ratios);
                grid.seed_counts = std::move(seed_counts);
                grid.p0_values = std::move(p0_values);
                grid.c_values = std::move(c_values);
                grid.replicates = replicates;
            }
            grid.base_seed = seed;
            SweepResult result;
            {
                py::gil_scoped_release release;
                result = run_sweep(grid, jobs);
            }
            py::list rows;
            for (const auto& r : result.rows) {
                py::dict d;
                d["policy"] = std::string(to_string(r.cell.policy));
                d["r"] = r.cell.r;
                d["seed_count"] = r.cell.seed_count;
                d["p0"] = r.cell.p0;
                d["c"] = r.cell.c;
                d["replicate"] = r.replicate;
                d["run_seed"] = r.run_seed;
                d["exposed"] = r.failed() ? py::object(py::none()) : py::object(py::int_(r.exposed));
                d["final_step"] = r.failed() ? py::object(py::none()) : py::object(py::int_(r.final_step));
                d["error"] = r.error ? py::object(py::str(*r.error)) : py::object(py::none());
                rows.append(d);
            }
            std::ostringstream csv_rows;
            write_rows_csv(csv_rows, result);
            py::dict out;
            out["rows"] = rows;
            out["rows_csv"] = csv_rows.str();
            const auto ratios_table = summarize_policy_ratios(result);
            out["group_over_random"] = ratios_table.overall.group_over_random;
            out["centrality_over_random"] = ratios_table.overall.centrality_over_random;
            return out;
        },
        py::arg("n") = 2000, py::arg("ratios") = std::vector<double>{0.03},
        py::arg("seed_counts") = std::vector<std::size_t>{25}, py::arg("p0_values") = std::vector<double>{0.05},
        py::arg("c_values") = std::vector<double>{3.0}, py::arg("replicates") = 20, py::arg("seed") = 0,
        py::arg("jobs") = 1, py::arg("paper_grid") = false);

    m.def(
        "sign_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            const auto r = sign_test(a, b);
            return py::make_tuple(r.wins, r.losses, r.ties, r.p_value);
        },
        py::arg("a"), py::arg("b"), "(wins, losses, ties, p) for H1: b > a");

    py::class_<MessageRecord>(m, "MessageRecord")
        .def(py::init([](std::string message_id, std::string user, std::int64_t timestamp, bool is_retweet,
                         std::optional<std::string> origin_user, std::string text) {
                 return MessageRecord{std::move(message_id), std::move(text), std::move(user), timestamp, is_retweet,
                                      std::move(origin_user)};
             }),
             py::arg("message_id"), py::arg("user"), py::arg("timestamp") = 0, py::arg("is_retweet") = false,
             py::arg("origin_user") = py::none(), py::arg("text") = "")
        .def_readwrite("message_id", &MessageRecord::message_id)
        .def_readwrite("text", &MessageRecord::text)
        .def_readwrite("user", &MessageRecord::user)
        .def_readwrite("timestamp", &MessageRecord::timestamp)
        .def_readwrite("is_retweet", &MessageRecord::is_retweet)
        .def_readwrite("origin_user", &MessageRecord::origin_user)
        .def(py::self == py::self)
        .def("__repr__", [](const MessageRecord& r) {
            return "<MessageRecord " + r.message_id + " user=" + r.user + ">";
        });

    m.def(
        "parse_log",
        [](const std::string& text, const std::string& format, bool strict) {
            std::istringstream in(text);
            ParseOptions opts;
            opts.strict = strict;
            return parse_log(in, parse_log_format(format), opts).log.records;
        },
        py::arg("text"), py::arg("format") = "csv", py::arg("strict") = true);
    m.def(
        "write_log",
        [](const std::vector<MessageRecord>& records, const std::string& format) {
            std::ostringstream out;
            write_log(out, to_log(records), parse_log_format(format));
            return out.str();
        },
        py::arg("records"), py::arg("format") = "csv");
    m.def(
        "export_trace",
        [](const CascadeTrace& trace, const std::string& run_id, const std::string& prefix) {
            return export_trace(trace, run_id, prefix).records;
        },
        py::arg("trace"), py::arg("run_id"), py::arg("user_prefix") = "u");
    m.def(
        "cashtag_filter",
        [](const std::vector<MessageRecord>& records, std::vector<std::string> symbols) {
            for (auto& s : symbols) {
                for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            }
            return cashtag_filter(to_log(records), symbols).records;
        },
        py::arg("records"), py::arg("symbols"));
    m.def("message_id_for", &message_id_for, py::arg("text"), py::arg("strip_retweet_prefix") = true);

    m.def(
        "repetition_counts",
        [](const std::vector<MessageRecord>& records) { return repetition_counts(to_log(records)).counts; },
        py::arg("records"), "[(message_id, count)] in first-appearance order");
    m.def(
        "fit_power_law",
        [](const std::vector<std::uint64_t>& xs, std::uint64_t xmin, std::uint64_t xmax, const std::string& method) {
            return fit_dict(fit_power_law(xs, xmin, xmax, parse_power_law_method(method)));
        },
        py::arg("observations"), py::arg("xmin") = 1, py::arg("xmax") = 300, py::arg("method") = "closed-form");
    m.def("recurrence_rate", [](const std::vector<std::string>& v) { return recurrence_rate(v); },
          py::arg("record_vector"));
    m.def(
        "recurrence_curve",
        [](const std::vector<MessageRecord>& records, const std::vector<std::string>& messages, std::size_t m_max) {
            const auto log = to_log(records);
            const auto curve = recurrence_curve(log, messages, m_max, "");
            std::vector<std::tuple<std::size_t, double, std::size_t>> out;
            for (const auto& p : curve.points) out.emplace_back(p.m, p.rate, p.vector_len);
            return out;
        },
        py::arg("records"), py::arg("messages"), py::arg("m_max"), "[(m, R, vector_len)]");
    m.def(
        "user_stats",
        [](const std::vector<MessageRecord>& records) {
            std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t, std::optional<std::uint64_t>>> out;
            for (const auto& r : user_stats(to_log(records))) out.emplace_back(r.user, r.tweets, r.retweets, r.avg);
            return out;
        },
        py::arg("records"), "[(user, tweets, retweets, avg or None)]");
    m.def("round_half_up_ratio", &round_half_up_ratio, py::arg("numerator"), py::arg("denominator"));
}
