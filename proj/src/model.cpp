#include "gts/model.hpp"

#include <cctype>

namespace gts {

std::string to_string(Band b) {
    return b == Band::L1 ? "L1" : "L5";
}

Band parse_band(const std::string& name) {
    if (name == "L1" || name == "E1" || name == "B1C") return Band::L1;
    if (name == "L5" || name == "E5a" || name == "B2a") return Band::L5;
    throw std::invalid_argument("unknown band '" + name + "'");
}

double db_to_linear(double x_db) {
    if (!std::isfinite(x_db)) throw std::invalid_argument("non-finite dB value");
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x_linear) {
    if (!std::isfinite(x_linear) || x_linear <= 0.0)
        throw std::invalid_argument("dB conversion needs a finite positive ratio");
    return 10.0 * std::log10(x_linear);
}

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize zero vector");
    return {x / n, y / n, z / n};
}

double distance(const Vec3& a, const Vec3& b) {
    return (a - b).norm();
}

GammaCoefficient gamma_coefficient(Band first, Band second) {
    if (first == second)
        throw std::invalid_argument("gamma is singular for identical bands");
    const double ratio = carrier_frequency(first) / carrier_frequency(second);
    return GammaCoefficient{ratio * ratio};
}

namespace {

char constellation_letter(Constellation c) {
    switch (c) {
        case Constellation::GPS: return 'G';
        case Constellation::Galileo: return 'E';
        case Constellation::BeiDou: return 'C';
    }
    return '?';
}

}  // namespace

std::string to_string(const SatelliteId& id) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%c%02d", constellation_letter(id.constellation), id.prn);
    return buf;
}

SatelliteId parse_satellite_id(const std::string& text) {
    if (text.size() < 2) throw std::invalid_argument("bad satellite id '" + text + "'");
    Constellation c;
    switch (text[0]) {
        case 'G': c = Constellation::GPS; break;
        case 'E': c = Constellation::Galileo; break;
        case 'C': c = Constellation::BeiDou; break;
        default: throw std::invalid_argument("bad constellation in satellite id '" + text + "'");
    }
    int prn = 0;
    for (size_t i = 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw std::invalid_argument("bad PRN in satellite id '" + text + "'");
        prn = prn * 10 + (text[i] - '0');
    }
    if (prn <= 0) throw std::invalid_argument("PRN must be positive in '" + text + "'");
    return SatelliteId{c, prn};
}

}  // namespace gts
