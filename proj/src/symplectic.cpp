#include "siegel/symplectic.hpp"

#include <boost/integer/common_factor_rt.hpp>

#include <algorithm>
#include <cstdio>
#include <deque>
#include <fstream>
#include <numeric>

namespace siegel {

namespace {

long long mod_reduce(long long x, long long N) {
    long long r = x % N;
    return r < 0 ? r + N : r;
}

IMat mod_matrix(const IMat& M, long N) {
    IMat R = M;
    for (int i = 0; i < R.rows(); ++i)
        for (int j = 0; j < R.cols(); ++j) R(i, j) = mod_reduce(R(i, j), N);
    return R;
}

std::string byte_key(const IMat& M) {
    std::string s;
    s.reserve(static_cast<std::size_t>(M.size()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            s.push_back(static_cast<char>(static_cast<unsigned char>(M(i, j))));
    return s;
}

int even_half_size(const IMat& M) {
    if (M.rows() != M.cols() || M.rows() < 2 || M.rows() % 2 != 0)
        throw std::invalid_argument("matrix must be square of even size >= 2");
    return static_cast<int>(M.rows()) / 2;
}

}  // namespace

IMat standard_J(int g) {
    IMat J = IMat::Zero(2 * g, 2 * g);
    for (int k = 0; k < g; ++k) {
        J(k, g + k) = -1;
        J(g + k, k) = 1;
    }
    return J;
}

std::optional<long long> is_gsp(const IMat& M) {
    int g = even_half_size(M);
    IMat J = standard_J(g);
    IMat P = M.transpose() * J * M;
    long long nu = P(g, 0);
    if (nu == 0) return std::nullopt;
    if (P != IMat(nu * J)) return std::nullopt;
    return nu;
}

std::optional<long> is_gsp_mod(const IMat& M, long N) {
    if (N < 2) throw std::invalid_argument("level must be >= 2");
    int g = even_half_size(M);
    IMat J = standard_J(g);
    IMat Mr = mod_matrix(M, N);
    IMat P = mod_matrix(Mr.transpose() * J * Mr, N);
    long nu = static_cast<long>(P(g, 0));
    if (boost::integer::gcd(nu, N) != 1) return std::nullopt;
    if (P != mod_matrix(nu * J, N)) return std::nullopt;
    return nu;
}

SymplecticMatrix make_symplectic(const IMat& M, long level) {
    SymplecticMatrix s;
    s.level = level;
    if (level == 0) {
        auto nu = is_gsp(M);
        if (!nu) throw std::invalid_argument("matrix does not satisfy the similitude relation");
        s.m = M;
        s.nu = *nu;
    } else {
        auto nu = is_gsp_mod(M, level);
        if (!nu) throw std::invalid_argument("matrix does not satisfy the similitude relation mod N");
        s.m = mod_matrix(M, level);
        s.nu = *nu;
    }
    return s;
}

SiegelPoint act_on_H(const Eigen::MatrixXd& alpha, const SiegelPoint& Z) {
    int g = Z.genus();
    if (alpha.rows() != 2 * g || alpha.cols() != 2 * g)
        throw std::invalid_argument("matrix size does not match the genus");

    // numeric similitude check with nu > 0
    Eigen::MatrixXd J = standard_J(g).cast<double>();
    Eigen::MatrixXd P = alpha.transpose() * J * alpha;
    double nu = P(g, 0);
    if ((P - nu * J).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, std::abs(nu)))
        throw std::invalid_argument("matrix does not satisfy the similitude relation");
    if (!(nu > 0)) throw std::invalid_argument("positive similitude factor required");

    Eigen::MatrixXcd Zc = Z.Z();
    auto A = alpha.topLeftCorner(g, g).cast<std::complex<double>>();
    auto B = alpha.topRightCorner(g, g).cast<std::complex<double>>();
    auto C = alpha.bottomLeftCorner(g, g).cast<std::complex<double>>();
    auto D = alpha.bottomRightCorner(g, g).cast<std::complex<double>>();
    Eigen::MatrixXcd W = C * Zc + D;
    Eigen::MatrixXcd num = A * Zc + B;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(W);
    double smin = svd.singularValues().minCoeff();
    double smax = svd.singularValues().maxCoeff();
    if (!(smin > 0) || smax / smin > 1e12)
        throw ConditioningError("CZ+D is numerically singular: condition number " +
                                std::to_string(smin > 0 ? smax / smin : std::numeric_limits<double>::infinity()));

    // (AZ+B)(CZ+D)^{-1} = ((CZ+D)^{-T}(AZ+B)^T)^T
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(W.transpose());
    Eigen::MatrixXcd R = lu.solve(num.transpose()).transpose();

    double scale = std::max(1.0, R.cwiseAbs().maxCoeff());
    if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw ConditioningError("transformed point lost symmetry beyond tolerance");
    Eigen::MatrixXcd S = (R + R.transpose()) / 2.0;
    return make_siegel_point(S);
}

SiegelPoint act_on_H(const SymplecticMatrix& alpha, const SiegelPoint& Z) {
    if (alpha.level != 0)
        throw std::invalid_argument("the action on H_g needs an integral matrix, not residues");
    return act_on_H(alpha.m.cast<double>().eval(), Z);
}

IndexClass act_on_index(const IMat& alpha, const FracVector& v) {
    int dim = v.dim();
    if (alpha.rows() != dim || alpha.cols() != dim)
        throw std::invalid_argument("matrix size does not match the characteristic dimension");
    FracVector w;
    w.entries.assign(static_cast<std::size_t>(dim), Rat(0));
    for (int k = 0; k < dim; ++k) {
        Rat acc = 0;
        for (int j = 0; j < dim; ++j)
            if (alpha(j, k) != 0) acc += Rat(alpha(j, k)) * v[j];  // alpha^T v
        w[k] = acc;
    }
    return canonical(w);
}

IndexClass act_on_index(const SymplecticMatrix& alpha, const IndexClass& v) {
    if (alpha.level != 0 && alpha.level != v.level)
        throw std::invalid_argument("level of the matrix does not match the level of the index");
    return act_on_index(alpha.m, v.rep);
}

CongruenceFlags congruence_tests(const IMat& alpha, long N) {
    if (!is_gsp(alpha)) throw std::invalid_argument("congruence tests expect an integral similitude matrix");
    if (N < 2) throw std::invalid_argument("level must be >= 2");
    int g = even_half_size(alpha);
    IMat R = mod_matrix(alpha, N);
    auto block_is = [&](int r0, int c0, bool identity) {
        for (int i = 0; i < g; ++i)
            for (int j = 0; j < g; ++j) {
                long long want = (identity && i == j) ? 1 : 0;
                if (R(r0 + i, c0 + j) != want) return false;
            }
        return true;
    };
    bool a_id = block_is(0, 0, true);
    bool b_zero = block_is(0, g, false);
    bool c_zero = block_is(g, 0, false);
    bool d_id = block_is(g, g, true);
    CongruenceFlags f;
    f.principal = a_id && b_zero && c_zero && d_id;
    f.upper = a_id && c_zero && d_id;
    f.lower = a_id && b_zero && d_id;
    return f;
}

IMat emat(int n, int r, int s) {
    if (r < 1 || r > n || s < 1 || s > n) throw std::invalid_argument("matrix unit index out of range");
    IMat E = IMat::Zero(n, n);
    E(r - 1, s - 1) = 1;
    return E;
}

IMat emat_sym(int n, int r, int s) {
    IMat E = emat(n, r, s);
    if (r != s) E += emat(n, s, r);
    return E;
}

SymplecticMatrix elementary(ElemKind kind, int i, int j, int sign, int g) {
    if (g < 1) throw std::invalid_argument("genus must be >= 1");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    IMat M = IMat::Zero(2 * g, 2 * g);
    IMat I = IMat::Identity(g, g);
    switch (kind) {
        case ElemKind::C1:
        case ElemKind::C2: {
            if (i < 1 || i > g || j < 1 || j > g)
                throw std::invalid_argument("indices must lie in 1..g");
            if (i == j) throw std::invalid_argument("equal indices degenerate the transvection");
            int s = (kind == ElemKind::C1) ? sign : -sign;
            M.topLeftCorner(g, g) = I + s * emat(g, i, j);
            M.bottomRightCorner(g, g) = I - s * emat(g, j, i);
            break;
        }
        case ElemKind::C3:
        case ElemKind::C4: {
            if (i < g + 1 || i > 2 * g || j < 1 || j > g)
                throw std::invalid_argument("first index must lie in g+1..2g and second in 1..g");
            int s = (kind == ElemKind::C3) ? sign : -sign;
            M.topLeftCorner(g, g) = I;
            M.bottomRightCorner(g, g) = I;
            M.bottomLeftCorner(g, g) = s * emat_sym(g, i - g, j);
            break;
        }
        case ElemKind::Rotation: {
            M.topRightCorner(g, g) = I;
            M.bottomLeftCorner(g, g) = -I;
            break;
        }
    }
    return make_symplectic(M.transpose().eval());
}

SymplecticMatrix transvection_set(const std::vector<int>& ks, int j, int g) {
    if (j < 1 || j > g) throw std::invalid_argument("column index must lie in 1..g");
    IMat U = IMat::Identity(g, g), L = IMat::Identity(g, g);
    std::vector<int> seen;
    for (int k : ks) {
        if (k < 1 || k > g || k == j) throw std::invalid_argument("row indices must lie in 1..g and differ from j");
        if (std::find(seen.begin(), seen.end(), k) != seen.end())
            throw std::invalid_argument("duplicate row index");
        seen.push_back(k);
        U += emat(g, k, j);
        L -= emat(g, j, k);
    }
    IMat M = IMat::Zero(2 * g, 2 * g);
    M.topLeftCorner(g, g) = U;
    M.bottomRightCorner(g, g) = L;
    return make_symplectic(M.transpose().eval());
}

IMat upper_unipotent(const IMat& S) {
    int g = static_cast<int>(S.rows());
    if (S.cols() != g || S != IMat(S.transpose()))
        throw std::invalid_argument("block must be square symmetric");
    IMat M = IMat::Identity(2 * g, 2 * g);
    M.topRightCorner(g, g) = S;
    return M;
}

IMat lower_unipotent(const IMat& S) {
    int g = static_cast<int>(S.rows());
    if (S.cols() != g || S != IMat(S.transpose()))
        throw std::invalid_argument("block must be square symmetric");
    IMat M = IMat::Identity(2 * g, 2 * g);
    M.bottomLeftCorner(g, g) = S;
    return M;
}

IMat gl_block(const IMat& A) {
    int g = static_cast<int>(A.rows());
    if (A.cols() != g) throw std::invalid_argument("block must be square");
    Eigen::MatrixXd Ad = A.cast<double>();
    double det = Ad.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-9)
        throw std::invalid_argument("block must be unimodular");
    Eigen::MatrixXd inv = Ad.inverse();
    IMat Ainv(g, g);
    for (int r = 0; r < g; ++r)
        for (int c = 0; c < g; ++c) Ainv(r, c) = std::llround(inv(r, c));
    if (IMat(A * Ainv) != IMat(IMat::Identity(g, g)))
        throw std::invalid_argument("block inverse is not integral");
    IMat M = IMat::Zero(2 * g, 2 * g);
    M.topLeftCorner(g, g) = A;
    M.bottomRightCorner(g, g) = Ainv.transpose();
    return M;
}

IMat similitude_diag(int g, long long nu) {
    IMat M = IMat::Identity(2 * g, 2 * g);
    for (int k = 0; k < g; ++k) M(g + k, g + k) = nu;
    return M;
}

IMat canonical_pm(const IMat& M, long N) {
    IMat A = mod_matrix(M, N);
    IMat B = A;
    for (int i = 0; i < B.rows(); ++i)
        for (int j = 0; j < B.cols(); ++j) B(i, j) = B(i, j) == 0 ? 0 : N - B(i, j);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            if (A(i, j) < B(i, j)) return A;
            if (B(i, j) < A(i, j)) return B;
        }
    return A;
}

IMat GroupTable::matrix(std::size_t i) const {
    IMat M(2 * g, 2 * g);
    const auto& e = elems[i];
    for (int r = 0; r < 2 * g; ++r)
        for (int c = 0; c < 2 * g; ++c)
            M(r, c) = e[static_cast<std::size_t>(r * 2 * g + c)];
    return M;
}

SymplecticMatrix GroupTable::element(std::size_t i) const {
    SymplecticMatrix s;
    s.m = matrix(i);
    s.level = N;
    s.nu = nus[i];
    return s;
}

std::optional<std::size_t> GroupTable::find(const IMat& M) const {
    auto it = pos.find(byte_key(canonical_pm(M, N)));
    if (it == pos.end()) return std::nullopt;
    return it->second;
}

std::vector<IMat> sp_generators(int g) {
    std::vector<IMat> gens;
    gens.push_back(elementary(ElemKind::Rotation, 1, 1, 1, g).m);
    for (int r = 1; r <= g; ++r)
        for (int s = r; s <= g; ++s) gens.push_back(upper_unipotent(emat_sym(g, r, s)));
    return gens;
}

std::vector<IMat> gsp_generators(int g, long N) {
    std::vector<IMat> gens = sp_generators(g);
    for (long nu = 2; nu < N; ++nu)
        if (boost::integer::gcd(nu, N) == 1) gens.push_back(similitude_diag(g, nu));
    return gens;
}

std::uint64_t generator_hash(int g, long N, const std::vector<IMat>& generators) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(g));
    mix(static_cast<std::uint64_t>(N));
    mix(generators.size());
    for (const IMat& G : generators)
        for (int i = 0; i < G.rows(); ++i)
            for (int j = 0; j < G.cols(); ++j)
                mix(static_cast<std::uint64_t>(mod_reduce(G(i, j), N)));
    return h;
}

GroupTable bfs_group(int g, long N, const std::vector<IMat>& generators,
                     std::size_t budget, const std::string& provenance) {
    if (N < 2) throw std::invalid_argument("level must be >= 2");
    if (N > 250) throw std::invalid_argument("level too large for byte-packed storage");
    GroupTable t;
    t.g = g;
    t.N = N;
    t.provenance = provenance.empty() ? "rotation+transvections" : provenance;
    t.gen_hash = generator_hash(g, N, generators);

    std::vector<IMat> gens;
    for (const IMat& G : generators) {
        if (G.rows() != 2 * g || G.cols() != 2 * g)
            throw std::invalid_argument("generator size does not match the genus");
        if (!is_gsp_mod(G, N)) throw std::invalid_argument("generator fails the similitude relation mod N");
        gens.push_back(mod_matrix(G, N));
    }

    auto push = [&](const IMat& M) -> bool {
        IMat C = canonical_pm(M, N);
        std::string key = byte_key(C);
        if (t.pos.count(key)) return false;
        if (t.size() >= budget)
            throw std::length_error("group closure budget exceeded at " + std::to_string(budget));
        auto nu = is_gsp_mod(C, N);
        if (!nu) throw std::logic_error("closure produced a non-similitude element");
        t.pos.emplace(std::move(key), t.size());
        std::vector<std::uint8_t> bytes(static_cast<std::size_t>(4 * g * g));
        for (int r = 0; r < 2 * g; ++r)
            for (int c = 0; c < 2 * g; ++c)
                bytes[static_cast<std::size_t>(r * 2 * g + c)] = static_cast<std::uint8_t>(C(r, c));
        t.elems.push_back(std::move(bytes));
        t.nus.push_back(static_cast<std::uint8_t>(*nu));
        return true;
    };

    push(IMat(IMat::Identity(2 * g, 2 * g)));
    std::size_t head = 0;
    while (head < t.size()) {
        IMat E = t.matrix(head);
        ++head;
        for (const IMat& G : gens) push(mod_matrix(E * G, N));
    }
    return t;
}

void save_group_table(const GroupTable& t, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open cache file for writing: " + tmp);
        f.write("SGTB0001", 8);
        auto w32 = [&](std::uint32_t x) { f.write(reinterpret_cast<const char*>(&x), 4); };
        auto w64 = [&](std::uint64_t x) { f.write(reinterpret_cast<const char*>(&x), 8); };
        w32(static_cast<std::uint32_t>(t.g));
        w32(static_cast<std::uint32_t>(t.N));
        w64(t.gen_hash);
        w64(t.size());
        w32(static_cast<std::uint32_t>(t.provenance.size()));
        f.write(t.provenance.data(), static_cast<std::streamsize>(t.provenance.size()));
        for (std::size_t i = 0; i < t.size(); ++i) {
            f.write(reinterpret_cast<const char*>(t.elems[i].data()),
                    static_cast<std::streamsize>(t.elems[i].size()));
            f.write(reinterpret_cast<const char*>(&t.nus[i]), 1);
        }
        if (!f) throw std::runtime_error("short write to cache file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move cache file into place: " + path);
}

std::optional<GroupTable> load_group_table(const std::string& path, int g, long N,
                                           std::uint64_t gen_hash) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    char magic[8];
    f.read(magic, 8);
    if (!f || std::string(magic, 8) != "SGTB0001") return std::nullopt;
    auto r32 = [&]() {
        std::uint32_t x = 0;
        f.read(reinterpret_cast<char*>(&x), 4);
        return x;
    };
    auto r64 = [&]() {
        std::uint64_t x = 0;
        f.read(reinterpret_cast<char*>(&x), 8);
        return x;
    };
    std::uint32_t fg = r32(), fN = r32();
    std::uint64_t fh = r64(), count = r64();
    std::uint32_t plen = r32();
    if (!f || fg != static_cast<std::uint32_t>(g) || fN != static_cast<std::uint32_t>(N) ||
        fh != gen_hash)
        return std::nullopt;
    GroupTable t;
    t.g = g;
    t.N = N;
    t.gen_hash = gen_hash;
    t.provenance.resize(plen);
    f.read(t.provenance.data(), plen);
    std::size_t esz = static_cast<std::size_t>(4 * g * g);
    t.elems.reserve(count);
    t.nus.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::vector<std::uint8_t> bytes(esz);
        std::uint8_t nu = 0;
        f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(esz));
        f.read(reinterpret_cast<char*>(&nu), 1);
        if (!f) return std::nullopt;
        std::string key(bytes.begin(), bytes.end());
        t.pos.emplace(std::move(key), t.elems.size());
        t.elems.push_back(std::move(bytes));
        t.nus.push_back(nu);
    }
    return t;
}

GroupTable bfs_group_cached(int g, long N, const std::vector<IMat>& generators,
                            const std::string& cache_path, std::size_t budget,
                            const std::string& provenance) {
    std::uint64_t h = generator_hash(g, N, generators);
    if (!cache_path.empty()) {
        if (auto t = load_group_table(cache_path, g, N, h)) return std::move(*t);
    }
    GroupTable t = bfs_group(g, N, generators, budget, provenance);
    if (!cache_path.empty()) save_group_table(t, cache_path);
    return t;
}

std::vector<std::size_t> stabilizer(const GroupTable& t, const std::vector<IndexClass>& W) {
    for (const IndexClass& w : W)
        if (w.level != t.N)
            throw std::invalid_argument("index level does not match the table level");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        SymplecticMatrix a = t.element(i);
        bool fixes = true;
        for (const IndexClass& w : W)
            if (!(act_on_index(a, w) == w)) {
                fixes = false;
                break;
            }
        if (fixes) out.push_back(i);
    }
    return out;
}

}  // namespace siegel
