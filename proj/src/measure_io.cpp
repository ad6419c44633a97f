#include "pvc/measure_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pvc {

namespace {

using json = nlohmann::ordered_json;

void expect_keys(const json& o, std::initializer_list<const char*> allowed,
                 const std::string& ctx) {
    for (auto it = o.begin(); it != o.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw InputError("unknown key '" + it.key() + "' in " + ctx);
    }
}

Cplx read_cplx(const json& v, const std::string& ctx) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw InputError(ctx + ": expected [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

double read_num(const json& o, const char* key, const std::string& ctx) {
    if (!o.contains(key) || !o[key].is_number())
        throw InputError(ctx + ": missing numeric '" + std::string(key) + "'");
    return o[key].get<double>();
}

std::vector<double> read_realvec(const json& v, const std::string& ctx) {
    if (!v.is_array()) throw InputError(ctx + ": expected array");
    std::vector<double> out;
    for (auto& e : v) {
        if (!e.is_number()) throw InputError(ctx + ": expected numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::string dir_of(const std::string& path) {
    size_t pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

AreaDensity load_area_grid(const json& o, const std::string& base_dir, const std::string& ctx) {
    std::string region = o.at("region").get<std::string>();
    std::string grid = o.at("grid").get<std::string>();
    std::string path = grid.size() && grid[0] == '/' ? grid : base_dir + "/" + grid;
    std::ifstream in(path);
    if (!in) throw InputError(ctx + ": cannot open grid CSV " + path);
    std::string line;
    std::getline(in, line);   // header: x,y,re[,im]
    std::map<double, std::map<double, Cplx>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() < 3) throw InputError(ctx + ": grid row needs x,y,re[,im]");
        rows[vals[1]][vals[0]] = Cplx(vals[2], vals.size() > 3 ? vals[3] : 0.0);
    }
    if (rows.empty()) throw InputError(ctx + ": empty grid CSV");
    size_t nx = rows.begin()->second.size(), ny = rows.size();
    AreaDensity d;
    d.nx = static_cast<int>(nx);
    d.ny = static_cast<int>(ny);
    d.re.resize(nx * ny);
    d.im.resize(nx * ny);
    size_t iy = 0;
    double xmin = rows.begin()->second.begin()->first, xmax = rows.begin()->second.rbegin()->first;
    for (auto& [y, row] : rows) {
        if (row.size() != nx) throw InputError(ctx + ": ragged grid CSV");
        size_t ix = 0;
        for (auto& [x, v] : row) {
            d.re[iy * nx + ix] = v.real();
            d.im[iy * nx + ix] = v.imag();
            ++ix;
        }
        ++iy;
    }
    d.x0 = xmin;
    d.x1 = xmax;
    d.y0 = rows.begin()->first;
    d.y1 = rows.rbegin()->first;
    if (region == "disk") {
        if (!o.contains("center") || !o.contains("radius"))
            throw InputError(ctx + ": disk region needs center and radius");
        d.region = AreaDensity::Region::Disk;
        d.center = read_cplx(o.at("center"), ctx + ".center");
        d.radius = read_num(o, "radius", ctx);
    } else if (region == "rect") {
        if (o.contains("center") || o.contains("radius"))
            throw InputError(ctx + ": center/radius are disk-only keys");
        d.region = AreaDensity::Region::Rect;
    } else {
        throw InputError(ctx + ": region must be disk or rect");
    }
    return d;
}

Component parse_component(const json& o, const std::string& base_dir, int idx) {
    std::string ctx = "components[" + std::to_string(idx) + "]";
    if (!o.is_object()) throw InputError(ctx + ": expected object");
    if (!o.contains("kind")) throw InputError(ctx + ": missing 'kind'");
    std::string kind = o.at("kind").get<std::string>();
    Cplx coef{1.0, 0.0};
    if (o.contains("coef")) coef = read_cplx(o.at("coef"), ctx + ".coef");

    if (kind == "atom") {
        expect_keys(o, {"kind", "coef", "at"}, ctx);
        Cplx at = read_cplx(o.at("at"), ctx + ".at");
        return Component{coef, Atom{at, Cplx(1.0, 0.0)}};
    }
    if (kind == "interval") {
        expect_keys(o, {"kind", "coef", "a", "b", "family", "params"}, ctx);
        double a = read_num(o, "a", ctx), b = read_num(o, "b", ctx);
        std::string family = o.at("family").get<std::string>();
        json params = o.contains("params") ? o.at("params") : json::object();
        if (family == "arcsine") {
            expect_keys(params, {}, ctx + ".params");
            return Component{coef, IntervalDensity::arcsine(a, b)};
        }
        if (family == "semicircle") {
            expect_keys(params, {}, ctx + ".params");
            IntervalDensity d = IntervalDensity::semicircle(a, b);
            return Component{coef, d};
        }
        if (family == "uniform") {
            expect_keys(params, {}, ctx + ".params");
            return Component{coef, IntervalDensity::uniform(a, b)};
        }
        if (family == "jacobi") {
            expect_keys(params, {"alpha", "beta", "poly", "scale"}, ctx + ".params");
            double alpha = read_num(params, "alpha", ctx + ".params");
            double beta = read_num(params, "beta", ctx + ".params");
            std::vector<double> poly =
                params.contains("poly") ? read_realvec(params.at("poly"), ctx) : std::vector<double>{1.0};
            double scale = params.contains("scale") ? read_num(params, "scale", ctx) : 1.0;
            return Component{coef, IntervalDensity::jacobi_poly(a, b, alpha, beta, poly, scale)};
        }
        if (family == "tabulated") {
            expect_keys(params, {"x", "y", "alpha", "beta"}, ctx + ".params");
            std::vector<double> xs = read_realvec(params.at("x"), ctx);
            std::vector<double> ys = read_realvec(params.at("y"), ctx);
            double alpha = params.contains("alpha") ? read_num(params, "alpha", ctx) : 0.0;
            double beta = params.contains("beta") ? read_num(params, "beta", ctx) : 0.0;
            return Component{coef, IntervalDensity::tabulated(a, b, xs, ys, alpha, beta)};
        }
        if (family == "equilibrium") {
            expect_keys(params, {"intervals", "index", "poly", "scale"}, ctx + ".params");
            std::vector<std::pair<double, double>> sys;
            for (auto& iv : params.at("intervals")) {
                auto v = read_realvec(iv, ctx);
                if (v.size() != 2) throw InputError(ctx + ": interval needs [a,b]");
                sys.emplace_back(v[0], v[1]);
            }
            int index = static_cast<int>(read_num(params, "index", ctx));
            std::vector<double> poly = read_realvec(params.at("poly"), ctx);
            double scale = read_num(params, "scale", ctx);
            IntervalDensity d = IntervalDensity::equilibrium(sys, index, poly, scale);
            if (std::abs(d.a - a) > 1e-12 || std::abs(d.b - b) > 1e-12)
                throw InputError(ctx + ": a/b disagree with the indexed system interval");
            return Component{coef, d};
        }
        throw InputError(ctx + ": unknown family '" + family + "'");
    }
    if (kind == "curve") {
        expect_keys(o, {"kind", "coef", "shape", "center", "radius", "density", "value",
                        "samples"},
                    ctx);
        std::string shape = o.at("shape").get<std::string>();
        if (shape != "circle") throw InputError(ctx + ": shape must be 'circle'");
        Cplx center = read_cplx(o.at("center"), ctx + ".center");
        double radius = read_num(o, "radius", ctx);
        std::string density = o.contains("density") ? o.at("density").get<std::string>() : "unit";
        Cplx value =
            o.contains("value") ? read_cplx(o.at("value"), ctx + ".value") : Cplx(1.0, 0.0);
        int samples = o.contains("samples") ? static_cast<int>(read_num(o, "samples", ctx)) : 1024;
        CurveDensityKind k;
        if (density == "unit")
            k = CurveDensityKind::Unit;
        else if (density == "radical2")
            k = CurveDensityKind::Radical2;
        else
            throw InputError(ctx + ": density must be 'unit' or 'radical2'");
        return Component{coef, CurveDensity::circle(center, radius, k, value, samples)};
    }
    if (kind == "area") {
        expect_keys(o, {"kind", "coef", "region", "grid", "center", "radius"}, ctx);
        return Component{coef, load_area_grid(o, base_dir, ctx)};
    }
    throw InputError(ctx + ": unknown kind '" + kind + "'");
}

} // namespace

MeasureFile parse_measure_json(const std::string& text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw InputError(std::string("measure spec: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("measure spec: top level must be an object");
    expect_keys(doc, {"components", "name", "expect"}, "measure spec");
    if (!doc.contains("components") || !doc.at("components").is_array())
        throw InputError("measure spec: missing 'components' array");
    MeasureFile mf;
    if (doc.contains("name")) mf.name = doc.at("name").get<std::string>();
    if (doc.contains("expect")) {
        std::string e = doc.at("expect").get<std::string>();
        if (e == "fail")
            mf.expect_fail = true;
        else if (e != "pass")
            throw InputError("measure spec: 'expect' must be \"pass\" or \"fail\"");
    }
    std::vector<Component> comps;
    int idx = 0;
    for (auto& c : doc.at("components")) comps.push_back(parse_component(c, base_dir, idx++));
    mf.measure = make_measure(std::move(comps));
    return mf;
}

MeasureFile load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open measure spec " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_measure_json(ss.str(), dir_of(path));
}

namespace {

std::string num_str(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }

} // namespace

void save_measure_file(const ComplexMeasure& m, const std::string& path, const std::string& name,
                       bool expect_fail) {
    json doc;
    if (!name.empty()) doc["name"] = name;
    if (expect_fail) doc["expect"] = "fail";
    doc["components"] = json::array();
    int area_idx = 0;
    std::string stem = path;
    if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") stem.resize(stem.size() - 5);
    for (const auto& c : m.components()) {
        json o;
        o["coef"] = cplx_json(c.coef);
        if (const auto* at = std::get_if<Atom>(&c.shape)) {
            o["kind"] = "atom";
            o["at"] = cplx_json(at->location);
            // Folded weight survives in the coefficient.
            o["coef"] = cplx_json(c.coef * at->weight);
        } else if (const auto* d = std::get_if<IntervalDensity>(&c.shape)) {
            o["kind"] = "interval";
            o["a"] = d->a;
            o["b"] = d->b;
            switch (d->family) {
                case IntervalFamily::Arcsine:
                    o["family"] = "arcsine";
                    break;
                case IntervalFamily::Semicircle:
                    o["family"] = "semicircle";
                    break;
                case IntervalFamily::Uniform:
                    o["family"] = "uniform";
                    break;
                case IntervalFamily::JacobiPoly:
                    o["family"] = "jacobi";
                    o["params"] = {{"alpha", d->alpha},
                                   {"beta", d->beta},
                                   {"poly", d->poly},
                                   {"scale", d->scale}};
                    break;
                case IntervalFamily::Tabulated:
                    o["family"] = "tabulated";
                    o["params"] = {{"x", d->tab_x},
                                   {"y", d->tab_y},
                                   {"alpha", d->alpha},
                                   {"beta", d->beta}};
                    break;
                case IntervalFamily::Equilibrium: {
                    o["family"] = "equilibrium";
                    json ivs = json::array();
                    for (auto& [a, b] : d->system) ivs.push_back(json::array({a, b}));
                    o["params"] = {{"intervals", ivs},
                                   {"index", d->index},
                                   {"poly", d->poly},
                                   {"scale", d->scale}};
                    break;
                }
            }
        } else if (const auto* cd = std::get_if<CurveDensity>(&c.shape)) {
            if (cd->cosc.size() != 1 || cd->sinc.size() != 1 ||
                cd->dens_kind == CurveDensityKind::Custom)
                throw InputError("save_measure_file: only circle curves with named densities serialize");
            o["kind"] = "curve";
            o["shape"] = "circle";
            o["center"] = cplx_json(cd->center);
            o["radius"] = cd->cosc[0].real();
            o["density"] = cd->dens_kind == CurveDensityKind::Unit ? "unit" : "radical2";
            if (cd->dens_kind == CurveDensityKind::Unit) o["value"] = cplx_json(cd->dens_value);
        } else {
            const auto& ad = std::get<AreaDensity>(c.shape);
            std::string grid = stem + "_grid" + std::to_string(area_idx++) + ".csv";
            std::ofstream g(grid);
            if (!g) throw InputError("cannot write grid CSV " + grid);
            g << "x,y,re,im\n";
            for (int iy = 0; iy < ad.ny; ++iy)
                for (int ix = 0; ix < ad.nx; ++ix) {
                    double x = ad.x0 + (ad.x1 - ad.x0) * ix / (ad.nx - 1.0);
                    double y = ad.y0 + (ad.y1 - ad.y0) * iy / (ad.ny - 1.0);
                    g << num_str(x) << ',' << num_str(y) << ','
                      << num_str(ad.re[static_cast<size_t>(iy) * ad.nx + ix]) << ','
                      << num_str(ad.im[static_cast<size_t>(iy) * ad.nx + ix]) << '\n';
                }
            o["kind"] = "area";
            o["region"] = ad.region == AreaDensity::Region::Disk ? "disk" : "rect";
            if (ad.region == AreaDensity::Region::Disk) {
                o["center"] = cplx_json(ad.center);
                o["radius"] = ad.radius;
            }
            size_t pos = grid.find_last_of('/');
            o["grid"] = pos == std::string::npos ? grid : grid.substr(pos + 1);
        }
        doc["components"].push_back(o);
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write measure spec " + path);
    out << doc.dump(2) << '\n';
}

void save_harmonic_sidecar(const HarmonicMeasureSpec& spec, const std::string& path) {
    json doc;
    doc["intervals"] = json::array();
    for (auto& [a, b] : spec.intervals) doc["intervals"].push_back(json::array({a, b}));
    doc["gap_roots"] = spec.gap_roots;
    doc["robin_constant"] = spec.robin_constant;
    std::ofstream out(path);
    if (!out) throw InputError("cannot write sidecar " + path);
    out << doc.dump(2) << '\n';
}

} // namespace pvc
