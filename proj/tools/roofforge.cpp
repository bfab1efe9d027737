// roofforge command-line interface.
//
// Exit codes: 0 ok, 1 invalid (validate), 2 usage, 3 parse/schema/graph errors,
// 4 other solve or edit errors, 5 solve did not converge.

#include "roofforge/adjacency.hpp"
#include "roofforge/editing.hpp"
#include "roofforge/io.hpp"
#include "roofforge/service.hpp"

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>

using namespace roofforge;

namespace {

enum Exit { ok = 0, invalid = 1, usage = 2, bad_input = 3, solve_error = 4, not_converged = 5 };

int exit_for(ErrorCode c)
{
    switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::InvalidGraph:
    case ErrorCode::FaceWithoutOutlineEdge:
    case ErrorCode::NonRealizableAdjacency:
    case ErrorCode::InvalidSolveSpec:
        return bad_input;
    case ErrorCode::NotConverged:
        return not_converged;
    default:
        return solve_error;
    }
}

void print_line(const std::string& s) { std::fwrite(s.data(), 1, s.size(), stdout); }

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("roofforge");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("ROOFFORGE_LOG"))
        spdlog::set_level(spdlog::level::from_str(lvl));
}

int report_solve(const SolveResult& r, const std::string& obj_path, const std::string& graph_out, bool facades)
{
    spdlog::info("solve took {:.3f} s, stop reason: {}", r.wall_time, r.stop_reason);
    print_line("err " + format_double(r.planarity) + "\niterations " + std::to_string(r.iterations) +
               "\nconverged " + (r.converged ? "true" : "false") + "\n");
    if (!graph_out.empty())
        write_text_file(graph_out, save_roof_graph({r.graph, r.embedding, std::nullopt}));
    if (!r.converged)
        return not_converged;
    if (!obj_path.empty()) {
        ExportOptions eo;
        eo.facades = facades;
        write_text_file(obj_path, export_building(r.graph, r.embedding, eo));
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    setup_logging();
    CLI::App app{"Planar roof meshes from roof graphs and dual roof graphs"};
    app.require_subcommand(1);

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "Optimize a roof and export a building OBJ");
    std::string primal_file, dual_file, obj_out, graph_out;
    std::optional<double> height;
    double lambda = 0.1, gamma = 0.05, eta = 1.0, theta = 3.0;
    bool variable = false, no_facades = false;
    std::string metric = "smallest_eig";
    int max_iters = 2000;
    auto* input = rec->add_option_group("input");
    input->add_option("--primal", primal_file, "roofgraph/1 file");
    input->add_option("--dual", dual_file, "roofdual/1 file");
    input->require_option(1);
    rec->add_option("--height", height, "Height of the fixed vertex");
    rec->add_option("--lambda", lambda, "Weight of the user-position term");
    rec->add_option("--gamma", gamma, "Weight of the aesthetic term (dual mode)");
    rec->add_option("--eta", eta, "Weight of the height-group variance term");
    rec->add_option("--theta", theta, "Outline alignment threshold in degrees (dual mode)");
    rec->add_option("--metric", metric, "smallest_eig | det | proj | diag | validity2d");
    rec->add_option("--max-iters", max_iters, "Iteration budget per stage");
    rec->add_flag("--variable-heights", variable, "Use the graph's height groups");
    rec->add_flag("--no-facades", no_facades, "Export the roof only");
    rec->add_option("-o,--output", obj_out, "OBJ output");
    rec->add_option("--graph-out", graph_out, "Write the optimized roofgraph/1 file");

    // validate
    auto* val = app.add_subcommand("validate", "Check a 2D embedding for liftability");
    std::string val_graph;
    double tol = 1e-6;
    val->add_option("--graph", val_graph, "roofgraph/1 file")->required();
    val->add_option("--tol", tol, "Residual tolerance");

    // resolve-adjacency
    auto* res = app.add_subcommand("resolve-adjacency", "Turn a probability matrix into dual graphs");
    std::string prob_file, strategy = "greedy", out_dir = ".";
    int max_candidates = 16;
    double threshold = 0.5;
    res->add_option("--dual", prob_file, "roofdual/1 file with probability triples")->required();
    res->add_option("--strategy", strategy)->check(CLI::IsMember({"greedy", "sampling"}));
    res->add_option("--max", max_candidates, "Candidate cap for sampling")->check(CLI::PositiveNumber);
    res->add_option("--threshold", threshold, "Keep pairs with p above this");
    res->add_option("--out-dir", out_dir, "Directory for candidate_NN.json files");

    // edit
    auto* ed = app.add_subcommand("edit", "Apply edit ops and re-optimize the affected regions");
    std::string ed_graph, ed_ops, ed_out;
    ed->add_option("--graph", ed_graph, "roofgraph/1 file with a 3D embedding")->required();
    ed->add_option("--ops", ed_ops, "Edit ops file")->required();
    ed->add_option("-o,--output", ed_out, "Output roofgraph/1 file")->required();

    // serve
    auto* srv = app.add_subcommand("serve", "Start the local HTTP service");
    int port = 8080;
    std::string host = "127.0.0.1";
    srv->add_option("--port", port)->check(CLI::Range(0, 65535));
    srv->add_option("--host", host);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*rec) {
            SolveSpec spec;
            spec.h = height;
            spec.lambda = lambda;
            spec.gamma = gamma;
            spec.eta = eta;
            spec.theta_deg = theta;
            spec.max_iters = max_iters;
            auto kind = parse_metric(metric);
            if (!kind)
                throw Error(ErrorCode::InvalidSolveSpec, "unknown metric '" + metric + "'");
            spec.planarity_kind = *kind;
            SolveResult r;
            if (!dual_file.empty()) {
                spec.mode = SolveMode::dual;
                spec.validate();
                r = optimize_dual(load_dual(read_text_file(dual_file)), spec);
            } else {
                const RoofGraphDocument doc = load_roof_graph(read_text_file(primal_file));
                spec.mode = variable ? SolveMode::variable_height : SolveMode::primal;
                spec.validate();
                r = variable ? optimize_variable_heights(doc.graph, doc.embedding, spec)
                             : optimize_primal(doc.graph, project_xy(doc.embedding), spec);
            }
            return report_solve(r, obj_out, graph_out, !no_facades);
        }
        if (*val) {
            const RoofGraphDocument doc = load_roof_graph(read_text_file(val_graph));
            const ValidityReport report = check_validity_2d(doc.graph, project_xy(doc.embedding), tol);
            print_line(pretty_json(validity_report_to_json(report)));
            return report.valid() ? ok : invalid;
        }
        if (*res) {
            const DualGraph d = load_dual(read_text_file(prob_file));
            if (!d.probabilities)
                throw Error(ErrorCode::SchemaError, "adjacency must be given as probability triples");
            std::vector<AdjacencyCandidate> cands;
            bool truncated = false;
            if (strategy == "greedy") {
                cands.push_back(resolve_greedy(d.outline, *d.probabilities, threshold));
            } else {
                SamplingResult sr = resolve_sampling(d.outline, *d.probabilities, threshold, max_candidates);
                cands = std::move(sr.candidates);
                truncated = sr.truncated;
            }
            std::filesystem::create_directories(out_dir);
            Json summary{{"strategy", strategy}, {"truncated", truncated}, {"candidates", Json::array()}};
            for (std::size_t k = 0; k < cands.size(); ++k) {
                char name[32];
                std::snprintf(name, sizeof name, "candidate_%02zu.json", k + 1);
                const std::string path = (std::filesystem::path(out_dir) / name).string();
                write_text_file(path, save_dual(candidate_dual(d.outline, cands[k])));
                Json c = candidate_to_json(cands[k]);
                c["file"] = name;
                summary["candidates"].push_back(std::move(c));
            }
            print_line(pretty_json(summary));
            return ok;
        }
        if (*ed) {
            RoofGraphDocument doc = load_roof_graph(read_text_file(ed_graph));
            const std::vector<EditOp> ops = load_edit_ops(read_text_file(ed_ops));
            if (doc.embedding.dim != 3)
                throw Error(ErrorCode::InvalidTarget, "edit needs a 3D embedding; run reconstruct first");
            Json steps = Json::array();
            bool all_converged = true;
            for (const EditOp& op : ops) {
                EditResult applied = apply_edit(doc.graph, doc.embedding, op);
                ReoptimizeOutcome o = reoptimize_edit(applied, SolveSpec{});
                doc.graph = o.result.graph;
                doc.embedding = o.result.embedding;
                Json region = Json::array();
                for (int v : o.region.region)
                    region.push_back(v + 1);
                steps.push_back(Json{{"op", edit_kind_name(op.kind)},
                                     {"region", std::move(region)},
                                     {"expansions", o.expansions},
                                     {"full_resolve", o.full_resolve},
                                     {"converged", o.result.converged},
                                     {"err", o.result.planarity}});
                all_converged = all_converged && o.result.converged;
            }
            write_text_file(ed_out, save_roof_graph(doc));
            print_line(pretty_json(Json{{"steps", std::move(steps)}}));
            return all_converged ? ok : not_converged;
        }
        if (*srv) {
            ServiceOptions so;
            so.host = host;
            Service service(so);
            const bool served = service.run(port, [&](int bound) {
                std::printf("serving on http://%s:%d\n", host.c_str(), bound);
                std::fflush(stdout);
            });
            if (!served)
                throw Error(ErrorCode::InvalidTarget, "cannot bind " + host + ":" + std::to_string(port));
            return ok;
        }
    } catch (const Error& e) {
        std::cerr << error_to_json(e).dump() << "\n";
        return exit_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
        return solve_error;
    }
    return usage;
}
