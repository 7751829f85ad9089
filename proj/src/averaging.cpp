#include "glerg/averaging.hpp"

#include <algorithm>
#include <cstdio>

namespace glerg {

FolnerSchedule FolnerSchedule::forward() { return FolnerSchedule(); }

FolnerSchedule FolnerSchedule::window(double drift) {
    if (drift < 0) throw Error(ErrorKind::InvalidArgument, "window drift must be >= 0");
    FolnerSchedule s;
    s.kind_ = Kind::Window;
    s.drift_ = drift;
    char buf[48];
    std::snprintf(buf, sizeof buf, "window:%g", drift);
    s.name_ = buf;
    return s;
}

FolnerSchedule FolnerSchedule::custom(Generator gen, std::string name, bool check) {
    FolnerSchedule s;
    s.kind_ = Kind::Custom;
    s.gen_ = std::move(gen);
    s.name_ = std::move(name);
    if (check) {
        double d1 = s.folner_defect(100, 1), d3 = s.folner_defect(10000, 1);
        s.folner_defect(1000, 1);
        if (!(d3 < 0.1 && d3 <= d1 + 1e-12))
            throw Error(ErrorKind::InvalidArgument,
                        s.name_ + " does not look Folner: defect " + std::to_string(d1) + " -> " + std::to_string(d3));
    }
    return s;
}

FolnerSchedule FolnerSchedule::parse(const std::string& spec) {
    if (spec == "forward") return forward();
    if (spec == "window") return window(1.0);
    if (spec.rfind("window:", 0) == 0) {
        try {
            return window(std::stod(spec.substr(7)));
        } catch (const std::logic_error&) {
        }
    }
    throw Error(ErrorKind::InvalidArgument, "unknown Folner schedule '" + spec + "'");
}

std::int64_t FolnerSchedule::size(std::int64_t N) const {
    return kind_ == Kind::Custom ? static_cast<std::int64_t>(gen_(N).size()) : N;
}

std::vector<std::int64_t> FolnerSchedule::set(std::int64_t N) const {
    std::vector<std::int64_t> out;
    for_each(N, [&](std::int64_t n) { out.push_back(n); });
    return out;
}

double FolnerSchedule::folner_defect(std::int64_t N, std::int64_t h) const {
    auto S = set(N);
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    if (S.empty()) return 1.0;
    std::vector<std::int64_t> T(S);
    for (auto& x : T) x -= h;
    std::vector<std::int64_t> diff;
    std::set_symmetric_difference(S.begin(), S.end(), T.begin(), T.end(), std::back_inserter(diff));
    return static_cast<double>(diff.size()) / static_cast<double>(S.size());
}

double gowers_norm(const std::vector<double>& b, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "Gowers norm needs k >= 1");
    const auto N = static_cast<std::int64_t>(b.size());
    if (N == 0) return 0.0;
    if (std::pow(static_cast<double>(N), k + 1) > 1e10)
        throw Error(ErrorKind::ComplexityRefusal,
                    "N^(k+1) = " + std::to_string(std::pow(static_cast<double>(N), k + 1)) + " exceeds 1e10");
    const int masks = 1 << k;
    std::vector<std::int64_t> h(k, 1), off(masks);
    double total = 0.0;
    for (;;) {
        std::int64_t sum = 0;
        for (auto x : h) sum += x;
        if (sum < N) {
            for (int e = 0; e < masks; ++e) {
                off[e] = 0;
                for (int i = 0; i < k; ++i)
                    if (e >> i & 1) off[e] += h[i];
            }
            double inner = 0.0;
            for (std::int64_t n = 1; n <= N - sum; ++n) {
                double p = 1.0;
                for (int e = 0; e < masks && p != 0.0; ++e) p *= b[n + off[e] - 1];
                inner += p;
            }
            total += std::abs(inner / static_cast<double>(N));
        }
        int i = 0;
        while (i < k && h[i] == N) h[i++] = 1;
        if (i == k) break;
        ++h[i];
    }
    return std::pow(total / std::pow(static_cast<double>(N), k), 1.0 / masks);
}

double weighted_uniform_cesaro(const std::function<double(double)>& f, const std::function<double(double)>& omega,
                               double a, double b, double step) {
    if (!(b > a) || !(step > 0)) throw Error(ErrorKind::InvalidArgument, "need a < b and step > 0");
    const auto n = static_cast<std::int64_t>(std::ceil((b - a) / step));
    const double h = (b - a) / static_cast<double>(n);
    double num = 0.0, den = 0.0, prev = 0.0;
    int dir = 0;
    for (std::int64_t i = 0; i <= n; ++i) {
        double t = a + h * static_cast<double>(i);
        double w = omega(t);
        if (!(w > 0)) throw Error(ErrorKind::NonMonotoneWeight, "weight not positive at t=" + std::to_string(t));
        if (i > 0 && w != prev) {
            int d = w > prev ? 1 : -1;
            if (dir && d != dir)
                throw Error(ErrorKind::NonMonotoneWeight, "weight changes direction at t=" + std::to_string(t));
            dir = d;
        }
        prev = w;
        double c = (i == 0 || i == n) ? 0.5 : 1.0;
        num += c * f(t) * w;
        den += c * w;
    }
    return num / den;
}

SubstitutionCheck substitution_check(const std::function<double(double)>& f,
                                     const std::function<double(double)>& sigma,
                                     const std::function<double(double)>& omega, double t0, double t1,
                                     double step_t, double step_s) {
    SubstitutionCheck r;
    r.plain = weighted_uniform_cesaro([&](double t) { return f(sigma(t)); }, [](double) { return 1.0; }, t0, t1, step_t);
    r.weighted = weighted_uniform_cesaro(f, omega, sigma(t0), sigma(t1), step_s);
    return r;
}

std::vector<TracePoint> convergence_trace(const std::function<std::complex<double>(std::int64_t)>& estimate,
                                          const std::vector<std::int64_t>& Ns) {
    std::vector<TracePoint> out;
    for (auto N : Ns) {
        TracePoint p;
        p.N = N;
        p.estimate = estimate(N);
        p.error_proxy = N >= 2 ? std::abs(p.estimate - estimate(N / 2)) : 0.0;
        out.push_back(p);
    }
    return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
    std::string s = "N,estimate_re,estimate_im,error_proxy\n";
    char buf[128];
    for (auto& p : trace) {
        std::snprintf(buf, sizeof buf, "%lld,%.12g,%.12g,%.12g\n", static_cast<long long>(p.N), p.estimate.real(),
                      p.estimate.imag(), p.error_proxy);
        s += buf;
    }
    return s;
}

} // namespace glerg
