#include "roofforge/service.hpp"

#include "roofforge/adjacency.hpp"
#include "roofforge/editing.hpp"
#include "roofforge/io.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace roofforge {

namespace {

struct SessionState {
    std::optional<DualGraph> dual;
    std::optional<EditSession> edits;
    SolveSpec spec;
    bool dirty = false;
};

struct Session {
    std::mutex mutation;
    std::mutex publish;
    std::shared_ptr<const SessionState> state = std::make_shared<SessionState>();

    std::shared_ptr<const SessionState> snapshot()
    {
        std::lock_guard lk(publish);
        return state;
    }
    void commit(SessionState next)
    {
        auto p = std::make_shared<const SessionState>(std::move(next));
        std::lock_guard lk(publish);
        state = std::move(p);
    }
};

void send_json(httplib::Response& res, int status, const Json& body)
{
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& name, const std::string& message)
{
    send_json(res, status, Json{{"error", name}, {"message", message}});
}

Json graph_json(const EditSession& s) { return roof_graph_to_json({s.graph(), s.embedding(), std::nullopt}); }

Json region_json(const AffectedRegion& r)
{
    Json ids = Json::array();
    for (int v : r.region)
        ids.push_back(v + 1);
    return ids;
}

}  // namespace

struct Service::Impl {
    ServiceOptions opts;
    httplib::Server server;
    std::thread worker;
    std::mutex sessions_mutex;
    std::map<std::string, std::shared_ptr<Session>> sessions;
    std::uint64_t next_id = 1;

    explicit Impl(ServiceOptions o) : opts(std::move(o)) { routes(); }

    std::shared_ptr<Session> find(const std::string& id)
    {
        std::lock_guard lk(sessions_mutex);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    SolveSpec capped(SolveSpec spec) const
    {
        if (opts.solve_cap > 0.0 && (spec.time_limit <= 0.0 || spec.time_limit > opts.solve_cap))
            spec.time_limit = opts.solve_cap;
        return spec;
    }

    /// Runs body under the session's mutation lock; 404 for unknown ids, 409 when busy, 422 on core errors.
    template <class F>
    void mutate(const httplib::Request& req, httplib::Response& res, const char* endpoint, F&& body)
    {
        auto session = find(req.matches[1]);
        if (!session)
            return send_error(res, 404, "UnknownSession", "no session '" + std::string(req.matches[1]) + "'");
        std::unique_lock lk(session->mutation, std::try_to_lock);
        if (!lk.owns_lock())
            return send_error(res, 409, "MutationInFlight", "another mutation is running on this session");
        if (opts.mutation_hook)
            opts.mutation_hook(endpoint);
        guarded(res, [&] {
            SessionState next = *session->snapshot();
            Json out = body(next);
            session->commit(std::move(next));
            send_json(res, 200, out);
        });
    }

    template <class F>
    void guarded(httplib::Response& res, F&& f)
    {
        try {
            f();
        } catch (const Error& e) {
            send_json(res, 422, error_to_json(e));
        } catch (const std::exception& e) {
            send_error(res, 500, "InternalError", e.what());
        }
    }

    static Json body_json(const httplib::Request& req)
    {
        if (req.body.empty())
            return Json::object();
        return parse_json(req.body);
    }

    static EditSession& need_graph(SessionState& s)
    {
        if (!s.edits)
            throw Error(ErrorCode::InvalidTarget, "the session has no graph");
        return *s.edits;
    }

    void routes()
    {
        server.Post("/sessions", [this](const httplib::Request&, httplib::Response& res) {
            std::string id;
            {
                std::lock_guard lk(sessions_mutex);
                char buf[32];
                std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(next_id++));
                id = buf;
                sessions.emplace(id, std::make_shared<Session>());
            }
            send_json(res, 201, Json{{"id", id}});
        });

        server.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto session = find(req.matches[1]);
            if (!session)
                return send_error(res, 404, "UnknownSession", "no session '" + std::string(req.matches[1]) + "'");
            auto s = session->snapshot();
            Json out{{"id", std::string(req.matches[1])}, {"dirty", s->dirty}};
            out["graph"] = s->edits ? graph_json(*s->edits) : Json(nullptr);
            out["undo_depth"] = s->edits ? s->edits->undo_depth() : 0;
            send_json(res, 200, out);
        });

        server.Put(R"(/sessions/([^/]+)/graph)", [this](const httplib::Request& req, httplib::Response& res) {
            mutate(req, res, "graph", [&](SessionState& s) {
                Json doc = parse_json(req.body);
                std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "";
                if (mode.empty())
                    mode = doc.is_object() && doc.value("format", "") == "roofdual/1" ? "dual" : "primal";
                Json out;
                if (mode == "dual") {
                    DualGraph dual = dual_from_json(doc);
                    PrimalRecovery rec = recover_primal(dual);
                    s.dual = std::move(dual);
                    s.edits.emplace(rec.graph, rec.layout);
                    out["mode"] = "dual";
                } else if (mode == "primal") {
                    RoofGraphDocument g = roof_graph_from_json(doc);
                    s.dual.reset();
                    s.edits.emplace(std::move(g.graph), std::move(g.embedding));
                    out["mode"] = "primal";
                } else {
                    throw Error(ErrorCode::SchemaError, "mode must be 'primal' or 'dual'");
                }
                s.dirty = true;
                out["graph"] = graph_json(*s.edits);
                return out;
            });
        });

        server.Post(R"(/sessions/([^/]+)/optimize)", [this](const httplib::Request& req, httplib::Response& res) {
            mutate(req, res, "optimize", [&](SessionState& s) {
                const SolveSpec spec = capped(solve_spec_from_json(body_json(req)));
                EditSession& ed = need_graph(s);
                SolveResult r;
                switch (spec.mode) {
                case SolveMode::primal:
                    r = optimize_primal(ed.graph(), project_xy(ed.embedding()), spec);
                    break;
                case SolveMode::variable_height:
                    r = optimize_variable_heights(ed.graph(), ed.embedding(), spec);
                    break;
                case SolveMode::dual:
                    if (!s.dual)
                        throw Error(ErrorCode::InvalidSolveSpec, "dual mode needs a roofdual/1 graph");
                    r = optimize_dual(*s.dual, spec);
                    break;
                }
                spdlog::info("session optimize: {} iterations, err {:.3e}, {:.3f} s", r.iterations, r.planarity,
                             r.wall_time);
                ed.replace(r.graph, r.embedding);
                s.spec = spec;
                s.dirty = false;
                return Json{{"result", solve_summary_to_json(r)}, {"graph", graph_json(ed)}};
            });
        });

        server.Post(R"(/sessions/([^/]+)/edits)", [this](const httplib::Request& req, httplib::Response& res) {
            mutate(req, res, "edits", [&](SessionState& s) {
                const EditOp op = edit_op_from_json(parse_json(req.body));
                EditSession& ed = need_graph(s);
                if (ed.embedding().dim != 3)
                    throw Error(ErrorCode::InvalidTarget, "optimize the session before editing");
                EditResult applied = ed.apply(op);
                ReoptimizeOutcome o = reoptimize_edit(applied, capped(s.spec));
                ed.amend(o.result.graph, o.result.embedding);
                s.dirty = false;
                Json out{{"graph", graph_json(ed)},
                         {"region", region_json(o.region)},
                         {"planarity", o.result.planarity},
                         {"converged", o.result.converged},
                         {"expansions", o.expansions},
                         {"full_resolve", o.full_resolve}};
                out["seed"] = applied.seed ? Json(*applied.seed + 1) : Json(nullptr);
                return out;
            });
        });

        server.Post(R"(/sessions/([^/]+)/undo)", [this](const httplib::Request& req, httplib::Response& res) {
            auto session = find(req.matches[1]);
            if (session && session->snapshot()->edits && session->snapshot()->edits->undo_depth() == 0)
                return send_error(res, 409, "NothingToUndo", "the undo journal is empty");
            mutate(req, res, "undo", [&](SessionState& s) {
                EditSession& ed = need_graph(s);
                if (!ed.undo())
                    throw Error(ErrorCode::InvalidTarget, "the undo journal is empty");
                return Json{{"graph", graph_json(ed)}, {"undo_depth", ed.undo_depth()}};
            });
        });

        server.Get(R"(/sessions/([^/]+)/mesh\.obj)", [this](const httplib::Request& req, httplib::Response& res) {
            auto session = find(req.matches[1]);
            if (!session)
                return send_error(res, 404, "UnknownSession", "no session '" + std::string(req.matches[1]) + "'");
            auto s = session->snapshot();
            guarded(res, [&] {
                if (!s->edits)
                    throw Error(ErrorCode::NonPlanarInput, "the session has no graph");
                ExportOptions eo;
                eo.facades = req.get_param_value("facades") != "0";
                res.status = 200;
                res.set_content(export_building(s->edits->graph(), s->edits->embedding(), eo), "text/plain");
            });
        });

        server.Post("/resolve-adjacency", [this](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const DualGraph d = dual_from_json(parse_json(req.body));
                if (!d.probabilities)
                    throw Error(ErrorCode::SchemaError, "adjacency must be given as probability triples");
                const std::string strategy =
                    req.has_param("strategy") ? req.get_param_value("strategy") : std::string("greedy");
                const double threshold =
                    req.has_param("threshold") ? std::stod(req.get_param_value("threshold")) : 0.5;
                Json cands = Json::array();
                bool truncated = false;
                if (strategy == "greedy") {
                    cands.push_back(candidate_to_json(resolve_greedy(d.outline, *d.probabilities, threshold)));
                } else if (strategy == "sampling") {
                    const int max = req.has_param("max") ? std::stoi(req.get_param_value("max")) : 16;
                    SamplingResult sr = resolve_sampling(d.outline, *d.probabilities, threshold, max);
                    for (const auto& c : sr.candidates)
                        cands.push_back(candidate_to_json(c));
                    truncated = sr.truncated;
                } else {
                    throw Error(ErrorCode::SchemaError, "strategy must be 'greedy' or 'sampling'");
                }
                send_json(res, 200, Json{{"candidates", std::move(cands)}, {"truncated", truncated}});
            });
        });

        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.status == 404 && res.body.empty())
                send_error(res, 404, "NotFound", "no such endpoint");
        });
    }
};

Service::Service(ServiceOptions opts) : impl_(std::make_unique<Impl>(std::move(opts))) {}

Service::~Service() { stop(); }

namespace {

int bind_server(httplib::Server& server, const std::string& host, int port)
{
    if (port == 0)
        return server.bind_to_any_port(host);
    return server.bind_to_port(host, port) ? port : -1;
}

}  // namespace

int Service::start(int port)
{
    const int bound = bind_server(impl_->server, impl_->opts.host, port);
    if (bound < 0)
        return -1;
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

bool Service::run(int port, const std::function<void(int)>& on_bound)
{
    const int bound = bind_server(impl_->server, impl_->opts.host, port);
    if (bound < 0)
        return false;
    if (on_bound)
        on_bound(bound);
    return impl_->server.listen_after_bind();
}

void Service::stop()
{
    impl_->server.stop();
    if (impl_->worker.joinable())
        impl_->worker.join();
}

}  // namespace roofforge
