// Python bindings for the cfie core: views, policies, metrics, accuracy
// tables, and the seeded perturbation generator. Policies and dimensions
// travel as plain strings on this side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "cfie/accuracy.hpp"
#include "cfie/errors.hpp"
#include "cfie/link.hpp"
#include "cfie/metrics.hpp"
#include "cfie/perturb.hpp"
#include "cfie/policies.hpp"
#include "cfie/types.hpp"
#include "cfie/version.hpp"
#include "cfie/view.hpp"

namespace py = pybind11;

namespace {

cfie::PolicyId policy_arg(const std::string& name) {
    auto p = cfie::policy_from_name(name);
    if (!p) {
        throw cfie::InputError("unknown policy \"" + name +
                               "\" (expected typearmor, ifcc, mcfi, or tcfi)");
    }
    return *p;
}

std::vector<cfie::TypeDescriptor> parse_type_list(const std::vector<std::string>& texts) {
    std::vector<cfie::TypeDescriptor> out;
    out.reserve(texts.size());
    for (const std::string& t : texts) out.push_back(cfie::parse_type(t));
    return out;
}

std::vector<std::string> format_type_list(const std::vector<cfie::TypeDescriptor>& types) {
    std::vector<std::string> out;
    out.reserve(types.size());
    for (const cfie::TypeDescriptor& t : types) out.push_back(cfie::format_type(t));
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Type-signature CFI policy evaluation core";
    m.attr("__version__") = cfie::kToolVersion;

    py::register_exception<cfie::InvariantError>(m, "InvariantError", PyExc_RuntimeError);
    py::register_exception<cfie::InputError>(m, "InputError", PyExc_ValueError);

    py::class_<cfie::TypeDescriptor>(m, "TypeDescriptor")
        .def(py::init([](const std::string& text) { return cfie::parse_type(text); }),
             py::arg("text"))
        .def("__str__", [](const cfie::TypeDescriptor& t) { return cfie::format_type(t); })
        .def("__repr__",
             [](const cfie::TypeDescriptor& t) {
                 return "TypeDescriptor('" + cfie::format_type(t) + "')";
             })
        .def("__eq__",
             [](const cfie::TypeDescriptor& a, const cfie::TypeDescriptor& b) { return a == b; },
             py::is_operator())
        .def("__hash__",
             [](const cfie::TypeDescriptor& t) {
                 return py::hash(py::str(cfie::format_type(t)));
             });

    m.def("parse_type", &cfie::parse_type, py::arg("text"));
    m.def("format_type", &cfie::format_type, py::arg("type"));
    m.def("relaxed_width",
          [](const std::string& text) { return cfie::relaxed_width(cfie::parse_type(text)); },
          py::arg("type"));
    m.def("type_equal_ifcc",
          [](const std::string& a, const std::string& b) {
              return cfie::type_equal_ifcc(cfie::parse_type(a), cfie::parse_type(b));
          },
          py::arg("a"), py::arg("b"));
    m.def("type_equal_mcfi",
          [](const std::string& a, const std::string& b) {
              return cfie::type_equal_mcfi(cfie::parse_type(a), cfie::parse_type(b));
          },
          py::arg("a"), py::arg("b"));

    py::class_<cfie::FunctionSignature>(m, "FunctionSignature")
        .def(py::init([](std::string fn_id, std::string link_key, const std::string& return_type,
                         const std::vector<std::string>& params, bool variadic,
                         bool address_taken) {
                 cfie::FunctionSignature fn;
                 fn.fn_id = std::move(fn_id);
                 fn.link_key = std::move(link_key);
                 fn.return_type = cfie::parse_type(return_type);
                 fn.params = parse_type_list(params);
                 fn.variadic = variadic;
                 fn.address_taken = address_taken;
                 return fn;
             }),
             py::arg("fn_id"), py::arg("link_key"), py::arg("return_type") = "void",
             py::arg("params") = std::vector<std::string>{}, py::arg("variadic") = false,
             py::arg("address_taken") = true)
        .def_readonly("fn_id", &cfie::FunctionSignature::fn_id)
        .def_readonly("link_key", &cfie::FunctionSignature::link_key)
        .def_property_readonly("return_type",
                               [](const cfie::FunctionSignature& fn) {
                                   return cfie::format_type(fn.return_type);
                               })
        .def_property_readonly("params",
                               [](const cfie::FunctionSignature& fn) {
                                   return format_type_list(fn.params);
                               })
        .def_readonly("variadic", &cfie::FunctionSignature::variadic)
        .def_readonly("address_taken", &cfie::FunctionSignature::address_taken);

    py::class_<cfie::CallSiteSignature>(m, "CallSiteSignature")
        .def(py::init([](std::string cs_id, std::string link_key,
                         const std::string& expects_return,
                         const std::vector<std::string>& args) {
                 cfie::CallSiteSignature cs;
                 cs.cs_id = std::move(cs_id);
                 cs.link_key = std::move(link_key);
                 cs.expects_return = cfie::parse_type(expects_return);
                 cs.args = parse_type_list(args);
                 return cs;
             }),
             py::arg("cs_id"), py::arg("link_key"), py::arg("expects_return") = "void",
             py::arg("args") = std::vector<std::string>{})
        .def_readonly("cs_id", &cfie::CallSiteSignature::cs_id)
        .def_readonly("link_key", &cfie::CallSiteSignature::link_key)
        .def_property_readonly("expects_return",
                               [](const cfie::CallSiteSignature& cs) {
                                   return cfie::format_type(cs.expects_return);
                               })
        .def_property_readonly("args",
                               [](const cfie::CallSiteSignature& cs) {
                                   return format_type_list(cs.args);
                               });

    py::class_<cfie::ProgramView>(m, "ProgramView")
        .def(py::init([](std::string label, std::vector<cfie::FunctionSignature> functions,
                         std::vector<cfie::CallSiteSignature> call_sites) {
                 cfie::ProgramView v;
                 v.label = std::move(label);
                 v.functions = std::move(functions);
                 v.call_sites = std::move(call_sites);
                 cfie::validate_view(v);
                 return v;
             }),
             py::arg("label"), py::arg("functions") = std::vector<cfie::FunctionSignature>{},
             py::arg("call_sites") = std::vector<cfie::CallSiteSignature>{})
        .def_readonly("label", &cfie::ProgramView::label)
        .def_readonly("functions", &cfie::ProgramView::functions)
        .def_readonly("call_sites", &cfie::ProgramView::call_sites)
        .def("address_taken_count", &cfie::ProgramView::address_taken_count);

    m.def("parse_view",
          [](const std::string& payload, bool lenient) {
              cfie::ParseOptions options;
              options.lenient = lenient;
              return cfie::parse_view(payload, options);
          },
          py::arg("payload"), py::arg("lenient") = false);
    m.def("serialize_view", &cfie::serialize_view, py::arg("view"));
    m.def("load_view_file",
          [](const std::string& path, bool lenient) {
              cfie::ParseOptions options;
              options.lenient = lenient;
              return cfie::load_view_file(path, options);
          },
          py::arg("path"), py::arg("lenient") = false);

    py::class_<cfie::MatchedProgram>(m, "MatchedProgram")
        .def_readonly("source", &cfie::MatchedProgram::source)
        .def_readonly("binary", &cfie::MatchedProgram::binary)
        .def_readonly("fn_pairs", &cfie::MatchedProgram::fn_pairs)
        .def_readonly("cs_map", &cfie::MatchedProgram::cs_map)
        .def_property_readonly("unmatched_functions",
                               [](const cfie::MatchedProgram& mp) {
                                   return py::make_tuple(mp.unmatched_fns.source,
                                                         mp.unmatched_fns.binary);
                               })
        .def_property_readonly("unmatched_call_sites", [](const cfie::MatchedProgram& mp) {
            return py::make_tuple(mp.unmatched_css.source, mp.unmatched_css.binary);
        });

    m.def("link_views", &cfie::link_views, py::arg("source"), py::arg("binary"));

    m.def("allows",
          [](const std::string& policy, const cfie::CallSiteSignature& cs,
             const cfie::FunctionSignature& fn) { return cfie::allows(policy_arg(policy), cs, fn); },
          py::arg("policy"), py::arg("call_site"), py::arg("function"));

    py::class_<cfie::TargetMap>(m, "TargetMap")
        .def_property_readonly("policy",
                               [](const cfie::TargetMap& tm) {
                                   return std::string(cfie::policy_name(tm.policy));
                               })
        .def_readonly("view_label", &cfie::TargetMap::view_label)
        .def_property_readonly("entries", [](const cfie::TargetMap& tm) {
            py::dict d;
            for (const auto& [cs_id, fn_ids] : tm.entries) {
                d[py::str(cs_id)] = fn_ids;
            }
            return d;
        });

    m.def("target_sets",
          [](const cfie::ProgramView& view, const std::string& policy) {
              return cfie::target_sets(view, policy_arg(policy));
          },
          py::arg("view"), py::arg("policy"));
    m.def("target_sets_naive",
          [](const cfie::ProgramView& view, const std::string& policy) {
              return cfie::target_sets_naive(view, policy_arg(policy));
          },
          py::arg("view"), py::arg("policy"));

    py::class_<cfie::DistributionStats>(m, "DistributionStats")
        .def_readonly("n", &cfie::DistributionStats::n)
        .def_readonly("mean", &cfie::DistributionStats::mean)
        .def_readonly("std", &cfie::DistributionStats::stddev)
        .def_readonly("min", &cfie::DistributionStats::min)
        .def_readonly("med", &cfie::DistributionStats::median)
        .def_readonly("p90", &cfie::DistributionStats::p90)
        .def_readonly("max", &cfie::DistributionStats::max)
        .def("__repr__", [](const cfie::DistributionStats& s) {
            std::ostringstream os;
            os << "DistributionStats(n=" << s.n;
            if (s.n != 0) os << ", mean=" << s.mean << ", std=" << s.stddev;
            os << ")";
            return os.str();
        });

    m.def("compute_stats", &cfie::compute_stats, py::arg("values"));
    m.def("ctr_stats", &cfie::ctr_stats, py::arg("target_map"));
    m.def("ctr_total", &cfie::ctr_total, py::arg("target_map"));
    m.def("zero_target_counts", &cfie::zero_target_counts, py::arg("target_map"));
    m.def("normalized_ctr", &cfie::normalized_ctr, py::arg("target_map"),
          py::arg("address_taken_count"));

    py::class_<cfie::SiteRatios>(m, "SiteRatios")
        .def_readonly("cs_id", &cfie::SiteRatios::cs_id)
        .def_readonly("ct_size", &cfie::SiteRatios::ct_size)
        .def_readonly("ct_prime_size", &cfie::SiteRatios::ctp_size)
        .def_readonly("r_t", &cfie::SiteRatios::r_t)
        .def_readonly("r_f", &cfie::SiteRatios::r_f);

    py::class_<cfie::RelativeReport>(m, "RelativeReport")
        .def_property_readonly("policy",
                               [](const cfie::RelativeReport& r) {
                                   return std::string(cfie::policy_name(r.policy));
                               })
        .def_readonly("per_site", &cfie::RelativeReport::per_site)
        .def_readonly("rt_stats", &cfie::RelativeReport::rt_stats)
        .def_readonly("rf_stats", &cfie::RelativeReport::rf_stats)
        .def_readonly("skipped_rt", &cfie::RelativeReport::skipped_rt)
        .def_readonly("skipped_rf", &cfie::RelativeReport::skipped_rf);

    m.def("relative_ctr", &cfie::relative_ctr, py::arg("matched"), py::arg("source_map"),
          py::arg("binary_map"));

    py::class_<cfie::BucketTable>(m, "BucketTable")
        .def_property_readonly("dimension",
                               [](const cfie::BucketTable& t) {
                                   return std::string(cfie::dimension_name(t.dimension));
                               })
        .def_property_readonly("side",
                               [](const cfie::BucketTable& t) {
                                   return std::string(cfie::side_name(t.side));
                               })
        .def_property_readonly("rows",
                               [](const cfie::BucketTable& t) {
                                   py::list rows;
                                   for (const auto& [label, counts] : t.rows) {
                                       rows.append(py::make_tuple(label, counts.correct,
                                                                  counts.wrong));
                                   }
                                   return rows;
                               })
        .def("overall_accuracy", &cfie::BucketTable::overall_accuracy);

    m.def("accuracy_report", &cfie::accuracy_report, py::arg("matched"));

    py::class_<cfie::PerturbConfig>(m, "PerturbConfig")
        .def(py::init([](std::uint64_t seed, double arity_err, double type_err,
                         double return_voidness_err, double drop_fn, double drop_cs,
                         double split_cs) {
                 cfie::PerturbConfig cfg;
                 cfg.seed = seed;
                 cfg.arity_err = arity_err;
                 cfg.type_err = type_err;
                 cfg.return_voidness_err = return_voidness_err;
                 cfg.drop_fn = drop_fn;
                 cfg.drop_cs = drop_cs;
                 cfg.split_cs = split_cs;
                 cfie::validate_config(cfg);
                 return cfg;
             }),
             py::arg("seed") = 0, py::arg("arity_err") = 0.0, py::arg("type_err") = 0.0,
             py::arg("return_voidness_err") = 0.0, py::arg("drop_fn") = 0.0,
             py::arg("drop_cs") = 0.0, py::arg("split_cs") = 0.0)
        .def_readonly("seed", &cfie::PerturbConfig::seed)
        .def_readonly("arity_err", &cfie::PerturbConfig::arity_err)
        .def_readonly("type_err", &cfie::PerturbConfig::type_err)
        .def_readonly("return_voidness_err", &cfie::PerturbConfig::return_voidness_err)
        .def_readonly("drop_fn", &cfie::PerturbConfig::drop_fn)
        .def_readonly("drop_cs", &cfie::PerturbConfig::drop_cs)
        .def_readonly("split_cs", &cfie::PerturbConfig::split_cs);

    m.def("perturb_view", &cfie::perturb_view, py::arg("view"), py::arg("config"));

    m.def("cdf_series", &cfie::cdf_series, py::arg("values"));
}
