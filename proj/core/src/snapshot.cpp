#include "ssakit/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ssakit/errors.hpp"

namespace ssa {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'S', 'A', 'K', 'S', 'N', 'A', 'P'};
constexpr std::array<char, 4> kTrailer = {'E', 'N', 'D', '.'};
constexpr std::uint64_t kMaxCount = std::uint64_t{1} << 40;

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    template <typename T>
    void pod(const T& v) {
        out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
    }
    void u8(std::uint8_t v) { pod(v); }
    void u64(std::uint64_t v) { pod(v); }
    void f64(double v) { pod(v); }
    void str(const std::string& s) {
        u64(s.size());
        out_.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    void doubles(const double* p, std::size_t n) {
        out_.write(reinterpret_cast<const char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    }
    void vec(const std::vector<double>& v) {
        u64(v.size());
        doubles(v.data(), v.size());
    }

private:
    std::ostream& out_;
};

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    void raw(char* p, std::size_t n) {
        in_.read(p, static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(0, "snapshot is truncated");
    }
    template <typename T>
    T pod() {
        T v;
        raw(reinterpret_cast<char*>(&v), sizeof(T));
        return v;
    }
    std::uint8_t u8() { return pod<std::uint8_t>(); }
    std::uint64_t u64() { return pod<std::uint64_t>(); }
    double f64() { return pod<double>(); }
    std::uint64_t count() {
        const auto n = u64();
        if (n > kMaxCount) throw FormatError(0, "snapshot holds an implausible element count");
        return n;
    }
    std::string str() {
        std::string s(count(), '\0');
        raw(s.data(), s.size());
        return s;
    }
    void doubles(double* p, std::size_t n) { raw(reinterpret_cast<char*>(p), n * sizeof(double)); }
    std::vector<double> vec() {
        std::vector<double> v(count());
        doubles(v.data(), v.size());
        return v;
    }

private:
    std::istream& in_;
};

template <typename E>
E enum_from(std::uint8_t v, std::uint8_t max) {
    if (v > max) throw FormatError(0, "snapshot holds an unknown enumeration value");
    return static_cast<E>(v);
}

}  // namespace

void save_snapshot(const Session& session, std::ostream& out, SnapshotOptions options) {
    Writer w(out);
    out.write(kMagic.data(), kMagic.size());
    w.pod(kSnapshotVersion);

    const auto& x = session.series();
    w.vec(x.data());
    w.u8(x.index() ? 1 : 0);
    if (x.index()) {
        w.f64(x.index()->start);
        w.f64(x.index()->step);
        w.str(x.index()->unit);
    }
    w.str(x.name());

    w.u64(session.spec().L);
    w.u8(static_cast<std::uint8_t>(session.kind()));
    w.u8(static_cast<std::uint8_t>(session.requested_method()));
    w.u8(static_cast<std::uint8_t>(session.method()));

    const auto& c = session.config();
    w.u64(c.cache_budget);
    w.f64(c.lanczos_tol);
    w.u64(c.lanczos_max_restarts);
    w.u64(c.lanczos_default_neig);
    w.u64(c.lanczos_seed);
    w.u64(c.auto_eigen_max_dim);
    w.f64(c.auto_eigen_neig_fraction);

    const auto& t = session.triples();
    const std::size_t n = t.size();
    w.u64(n);
    w.doubles(t.lambda.data(), n);
    w.u64(static_cast<std::uint64_t>(t.U.rows()));
    w.doubles(t.U.data(), static_cast<std::size_t>(t.U.size()));
    w.u8(t.V ? 1 : 0);
    if (t.V) {
        w.u64(static_cast<std::uint64_t>(t.V->rows()));
        w.doubles(t.V->data(), static_cast<std::size_t>(t.V->size()));
    }
    w.vec(t.order_values);
    for (auto z : t.zero_factor) w.u8(z);

    const auto keys = options.include_cache ? session.cached_indices() : std::vector<std::size_t>{};
    w.u64(keys.size());
    for (auto i : keys) {
        w.u64(i);
        w.vec(*session.elementary(i));
    }
    out.write(kTrailer.data(), kTrailer.size());
    if (!out) throw IoError("writing snapshot failed");
}

void save_snapshot(const Session& session, const std::filesystem::path& path, SnapshotOptions options) {
    std::ostringstream buf(std::ios::binary);
    save_snapshot(session, buf, options);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    const auto bytes = buf.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Session load_snapshot(std::istream& in) {
    Reader r(in);
    std::array<char, 8> magic{};
    r.raw(magic.data(), magic.size());
    if (magic != kMagic) throw FormatError(0, "not a snapshot file");
    const auto version = r.pod<std::uint32_t>();
    if (version != kSnapshotVersion) {
        throw FormatError(0, "snapshot version " + std::to_string(version) + " is not supported (expected " +
                                 std::to_string(kSnapshotVersion) + ")");
    }

    auto values = r.vec();
    std::optional<TimeIndex> index;
    if (r.u8()) {
        TimeIndex ti;
        ti.start = r.f64();
        ti.step = r.f64();
        ti.unit = r.str();
        index = std::move(ti);
    }
    auto name = r.str();
    TimeSeries series(std::move(values), std::move(index), std::move(name));

    const auto L = r.u64();
    const auto kind = enum_from<SsaKind>(r.u8(), 1);
    const auto requested = enum_from<SvdMethod>(r.u8(), 3);
    const auto resolved = enum_from<SvdMethod>(r.u8(), 3);

    SessionConfig c;
    c.cache_budget = r.u64();
    c.lanczos_tol = r.f64();
    c.lanczos_max_restarts = r.u64();
    c.lanczos_default_neig = r.u64();
    c.lanczos_seed = r.u64();
    c.auto_eigen_max_dim = r.u64();
    c.auto_eigen_neig_fraction = r.f64();

    Eigentriples t;
    const auto n = r.count();
    t.lambda.resize(n);
    r.doubles(t.lambda.data(), n);
    const auto rows = r.count();
    if (n && rows != L) throw FormatError(0, "snapshot eigenvectors do not match the window length");
    t.U.resize(static_cast<Eigen::Index>(n ? rows : L), static_cast<Eigen::Index>(n));
    r.doubles(t.U.data(), static_cast<std::size_t>(t.U.size()));
    if (r.u8()) {
        const auto vrows = r.count();
        Eigen::MatrixXd V(static_cast<Eigen::Index>(vrows), static_cast<Eigen::Index>(n));
        r.doubles(V.data(), static_cast<std::size_t>(V.size()));
        t.V = std::move(V);
    }
    t.order_values = r.vec();
    t.zero_factor.resize(n);
    for (auto& z : t.zero_factor) z = r.u8();

    struct Cached {
        std::size_t i;
        std::vector<double> values;
    };
    std::vector<Cached> cached(r.count());
    for (auto& e : cached) {
        e.i = r.u64();
        e.values = r.vec();
    }
    std::array<char, 4> trailer{};
    r.raw(trailer.data(), trailer.size());
    if (trailer != kTrailer) throw FormatError(0, "snapshot trailer is missing");

    Session s = Session::restore(std::move(series), L, kind, requested, resolved, c, std::move(t));
    for (auto& e : cached) s.seed_cache(e.i, std::move(e.values));
    return s;
}

Session load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot '" + path.string() + "'");
    return load_snapshot(in);
}

}  // namespace ssa
