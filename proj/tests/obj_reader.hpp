#pragma once

// Minimal Wavefront OBJ reader used to check exported files independently of the writer.

#include <Eigen/Dense>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace objtest {

struct ObjFile {
    std::vector<Eigen::Vector3d> v;
    std::map<std::string, std::vector<std::vector<int>>> groups;  // 0-based indices
};

inline ObjFile read_obj(const std::string& text)
{
    ObjFile obj;
    std::istringstream in(text);
    std::string line, group = "default";
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Eigen::Vector3d p;
            ls >> p.x() >> p.y() >> p.z();
            obj.v.push_back(p);
        } else if (tag == "g") {
            ls >> group;
        } else if (tag == "f") {
            std::vector<int> f;
            std::string tok;
            while (ls >> tok)
                f.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
            obj.groups[group].push_back(f);
        }
    }
    return obj;
}

/// Newell normal (unnormalized); points toward a viewer who sees the loop counter-clockwise.
inline Eigen::Vector3d newell(const ObjFile& o, const std::vector<int>& f)
{
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (std::size_t k = 0; k < f.size(); ++k) {
        const auto& a = o.v[f[k]];
        const auto& b = o.v[f[(k + 1) % f.size()]];
        n.x() += (a.y() - b.y()) * (a.z() + b.z());
        n.y() += (a.z() - b.z()) * (a.x() + b.x());
        n.z() += (a.x() - b.x()) * (a.y() + b.y());
    }
    return n;
}

/// Largest distance of a face vertex from its least-squares plane (SVD), relative to scale.
inline double plane_deviation(const ObjFile& o, const std::vector<int>& f, double scale)
{
    Eigen::MatrixXd m(f.size(), 3);
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (int v : f)
        c += o.v[v];
    c /= double(f.size());
    for (std::size_t k = 0; k < f.size(); ++k)
        m.row(k) = (o.v[f[k]] - c).transpose() / scale;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinV);
    const Eigen::Vector3d normal = svd.matrixV().col(2);
    return (m * normal).cwiseAbs().maxCoeff();
}

}  // namespace objtest
