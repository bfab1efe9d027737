#pragma once

#include <functional>
#include <memory>
#include <string>

namespace roofforge {

struct ServiceOptions {
    std::string host = "127.0.0.1";
    /// Upper bound on any single solve, in seconds.
    double solve_cap = 30.0;
    /// Called with the session's mutation lock held, before the mutation runs. Tests use it to
    /// keep a mutation in flight.
    std::function<void(const std::string& endpoint)> mutation_hook;
};

/// Local JSON-over-HTTP session service.
///
///   POST /sessions                    new session
///   GET  /sessions/{id}               current graph and embedding
///   PUT  /sessions/{id}/graph         roofgraph/1 or roofdual/1 body, optional ?mode=primal|dual
///   POST /sessions/{id}/optimize      solve spec body
///   POST /sessions/{id}/edits         edit op body
///   POST /sessions/{id}/undo
///   GET  /sessions/{id}/mesh.obj      optional ?facades=0
///   POST /resolve-adjacency           roofdual/1 with probabilities, ?strategy=&max=&threshold=
class Service {
public:
    explicit Service(ServiceOptions opts = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds and serves on a background thread; port 0 picks a free port. Returns the bound port.
    int start(int port);
    /// Binds and serves on the calling thread until stop(); on_bound receives the bound port.
    bool run(int port, const std::function<void(int)>& on_bound = {});
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace roofforge
