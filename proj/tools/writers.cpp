#include "writers.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace bellsim::cli {

std::string format_double(double value) {
    if (!std::isfinite(value)) {
        throw std::logic_error("refusing to serialize a non-finite number");
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
}

JsonValue JsonValue::str(std::string value) {
    JsonValue v;
    v.kind_ = Kind::String;
    v.string_ = std::move(value);
    return v;
}

JsonValue JsonValue::number(double value) {
    JsonValue v;
    v.kind_ = Kind::Number;
    v.number_ = value;
    return v;
}

JsonValue JsonValue::integer(std::uint64_t value) {
    JsonValue v;
    v.kind_ = Kind::Integer;
    v.integer_ = value;
    return v;
}

JsonValue JsonValue::boolean(bool value) {
    JsonValue v;
    v.kind_ = Kind::Boolean;
    v.boolean_ = value;
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue value) {
    if (kind_ != Kind::Object) {
        throw std::logic_error("set() on a non-object JSON value");
    }
    for (const auto& [existing, unused] : members_) {
        (void)unused;
        if (existing == key) {
            throw std::logic_error("duplicate JSON key '" + key + "'");
        }
    }
    members_.emplace_back(key, std::move(value));
    return *this;
}

JsonValue& JsonValue::push(JsonValue value) {
    if (kind_ != Kind::Array) {
        throw std::logic_error("push() on a non-array JSON value");
    }
    elements_.push_back(std::move(value));
    return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (const char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

void indent(std::string& out, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

}  // namespace

void JsonValue::write(std::string& out, int depth) const {
    switch (kind_) {
        case Kind::String:
            write_escaped(out, string_);
            break;
        case Kind::Number:
            out += format_double(number_);
            break;
        case Kind::Integer: {
            char buf[24];
            std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(integer_));
            out += buf;
            break;
        }
        case Kind::Boolean:
            out += boolean_ ? "true" : "false";
            break;
        case Kind::Object: {
            if (members_.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                indent(out, depth + 1);
                write_escaped(out, members_[i].first);
                out += ": ";
                members_[i].second.write(out, depth + 1);
                if (i + 1 < members_.size()) {
                    out += ',';
                }
                out += '\n';
            }
            indent(out, depth);
            out += '}';
            break;
        }
        case Kind::Array: {
            if (elements_.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < elements_.size(); ++i) {
                indent(out, depth + 1);
                elements_[i].write(out, depth + 1);
                if (i + 1 < elements_.size()) {
                    out += ',';
                }
                out += '\n';
            }
            indent(out, depth);
            out += ']';
            break;
        }
    }
}

std::string JsonValue::dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
}

namespace {

JsonValue json_unit_vector(const UnitVector3& v) {
    return JsonValue::object()
        .set("x", JsonValue::number(v.x()))
        .set("y", JsonValue::number(v.y()))
        .set("z", JsonValue::number(v.z()));
}

}  // namespace

JsonValue json_estimate(const CorrelationEstimate& estimate) {
    JsonValue obj = JsonValue::object();
    obj.set("model", JsonValue::str(estimate.model));
    obj.set("setting_a", json_unit_vector(estimate.setting_a));
    obj.set("setting_b", json_unit_vector(estimate.setting_b));
    obj.set("n", JsonValue::integer(estimate.n));
    obj.set("mean", JsonValue::number(estimate.mean));
    obj.set("stderr", JsonValue::number(estimate.stderr_));
    if (estimate.im_mean.has_value()) {
        obj.set("im_mean", JsonValue::number(*estimate.im_mean));
    }
    if (estimate.im_stderr.has_value()) {
        obj.set("im_stderr", JsonValue::number(*estimate.im_stderr));
    }
    return obj;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "model,kind,theta_deg,mean,stderr,n,im_mean\n";
    for (const SweepRow& row : rows) {
        out << row.model << ',' << row.kind << ',' << format_double(row.theta_deg) << ','
            << format_double(row.estimate->mean) << ',' << format_double(row.estimate->stderr_)
            << ',' << row.estimate->n << ',';
        if (row.estimate->im_mean.has_value()) {
            out << format_double(*row.estimate->im_mean);
        }
        out << '\n';
    }
}

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void write_sweep_svg(std::ostream& out, const std::vector<SweepRow>& rows, bool photon) {
    const double width = 720, height = 480;
    const double ml = 70, mr = 24, mt = 24, mb = 56;
    double theta_min = rows.front().theta_deg, theta_max = rows.front().theta_deg;
    for (const SweepRow& row : rows) {
        theta_min = std::min(theta_min, row.theta_deg);
        theta_max = std::max(theta_max, row.theta_deg);
    }
    if (theta_max - theta_min < 1e-9) {
        theta_min -= 1.0;  // degenerate single-angle grid: give the axis width
        theta_max += 1.0;
    }
    const double y_min = -1.1, y_max = 1.1;
    const auto sx = [&](double theta) {
        return ml + (theta - theta_min) / (theta_max - theta_min) * (width - ml - mr);
    };
    const auto sy = [&](double y) {
        return mt + (y_max - y) / (y_max - y_min) * (height - mt - mb);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Axes and guide lines.
    for (const double y : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
        out << "<line x1=\"" << fmt2(sx(theta_min)) << "\" y1=\"" << fmt2(sy(y)) << "\" x2=\""
            << fmt2(sx(theta_max)) << "\" y2=\"" << fmt2(sy(y))
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt2(ml - 8) << "\" y=\"" << fmt2(sy(y) + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << fmt2(y)
            << "</text>\n";
    }
    for (double theta = std::ceil(theta_min / 30.0) * 30.0; theta <= theta_max + 1e-9;
         theta += 30.0) {
        out << "<line x1=\"" << fmt2(sx(theta)) << "\" y1=\"" << fmt2(sy(y_min)) << "\" x2=\""
            << fmt2(sx(theta)) << "\" y2=\"" << fmt2(sy(y_max))
            << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt2(sx(theta)) << "\" y=\"" << fmt2(height - mb + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << fmt2(theta) << "</text>\n";
    }
    out << "<text x=\"" << fmt2((ml + width - mr) / 2) << "\" y=\"" << fmt2(height - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">analyzer angle "
           "(degrees)</text>\n";

    // Closed-form reference, sampled per degree.
    const double factor = photon ? 2.0 : 1.0;
    out << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1.5\" points=\"";
    const int steps = 256;
    for (int i = 0; i <= steps; ++i) {
        const double theta = theta_min + (theta_max - theta_min) * i / steps;
        const double y = -std::cos(factor * theta * 3.14159265358979323846 / 180.0);
        out << fmt2(sx(theta)) << ',' << fmt2(sy(y));
        if (i < steps) {
            out << ' ';
        }
    }
    out << "\"/>\n";

    // Estimates with 2-sigma bars.
    for (const SweepRow& row : rows) {
        const double x = sx(row.theta_deg);
        const double mean = row.estimate->mean;
        const double half = 2.0 * row.estimate->stderr_;
        out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(sy(mean - half)) << "\" x2=\""
            << fmt2(x) << "\" y2=\"" << fmt2(sy(mean + half))
            << "\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n";
        out << "<circle cx=\"" << fmt2(x) << "\" cy=\"" << fmt2(sy(mean))
            << "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
    }

    out << "<text x=\"" << fmt2(ml + 10) << "\" y=\"" << fmt2(mt + 16)
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << rows.front().model << " ("
        << rows.front().kind << "), points: estimates +/- 2 stderr; line: "
        << (photon ? "-cos(2 theta)" : "-cos(theta)") << "</text>\n";
    out << "</svg>\n";
}

}  // namespace bellsim::cli
