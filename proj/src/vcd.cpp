#include "hgl/vcd.hpp"

#include <fstream>
#include <functional>
#include <map>

namespace hgl {

VcdRecorder::VcdRecorder(SimCore& sim) : sim_(sim) {
    index_of_.assign(sim_.circuit().signal_count(), -1);
    sim_.add_client(this);
}

std::string VcdRecorder::code_for(std::size_t n) const {
    // printable identifier codes '!'..'~', little-endian base 94
    std::string s;
    do {
        s += static_cast<char>('!' + n % 94);
        n /= 94;
    } while (n);
    return s;
}

void VcdRecorder::track(SignalId s) {
    if (index_of_[s] >= 0) return;  // double-track is idempotent
    Tracked t;
    t.signal = s;
    t.id_code = code_for(tracked_.size());
    t.last = render(sim_.sig(s));
    index_of_[s] = static_cast<int>(tracked_.size());
    initial_.emplace_back(s, t.last);
    tracked_.push_back(std::move(t));
}

void VcdRecorder::track_module(ModuleId m) {
    const Circuit& c = sim_.circuit();
    const ModuleDef& def = c.module(m);
    for (SignalId s : def.signals)
        if (!c.signal(s).name_hint.empty()) track(s);
    for (ModuleId child : def.children) track_module(child);
}

std::string VcdRecorder::render(const SignalData& s) {
    std::string out;
    for (std::uint32_t i = s.width; i-- > 0;) {
        if (words::bit(s.cur_x.data(), s.cur_x.size(), i))
            out += 'x';
        else
            out += words::bit(s.cur_v.data(), s.cur_v.size(), i) ? '1' : '0';
    }
    return out;
}

void VcdRecorder::on_time_end(std::uint64_t t) {
    bool stamped = false;
    for (SignalId s : sim_.dirty_signals()) {
        int idx = index_of_[s];
        if (idx < 0) continue;
        Tracked& tr = tracked_[static_cast<std::size_t>(idx)];
        std::string now = render(sim_.sig(s));
        if (now == tr.last) continue;
        if (!stamped) {
            changes_ << "#" << t << "\n";
            stamped = true;
        }
        if (now.size() == 1)
            changes_ << now << tr.id_code << "\n";
        else
            changes_ << "b" << now << " " << tr.id_code << "\n";
        tr.last = std::move(now);
    }
}

std::string VcdRecorder::text() const {
    const Circuit& c = sim_.circuit();
    std::ostringstream os;
    os << "$timescale 1ns $end\n";

    // scope tree mirrors the module hierarchy; each module lists its tracked
    // signals, top-down by id
    std::map<ModuleId, std::vector<std::size_t>> by_module;
    for (std::size_t i = 0; i < tracked_.size(); ++i)
        by_module[c.signal(tracked_[i].signal).owner].push_back(i);

    std::map<std::string, int> used_names;
    auto var_name = [&](const SignalData& s) {
        std::string base = s.name_hint.empty() ? "s" + std::to_string(s.id) : s.name_hint;
        int& n = used_names[base];
        std::string name = n == 0 ? base : base + "_" + std::to_string(n);
        n += 1;
        return name;
    };

    std::function<void(ModuleId)> scope = [&](ModuleId m) {
        const ModuleDef& def = c.module(m);
        os << "$scope module " << (def.name.empty() ? "top" : def.name) << " $end\n";
        auto it = by_module.find(m);
        if (it != by_module.end()) {
            for (std::size_t i : it->second) {
                const SignalData& s = c.signal(tracked_[i].signal);
                os << "$var wire " << s.width << " " << tracked_[i].id_code << " "
                   << var_name(s) << " $end\n";
            }
        }
        for (ModuleId child : def.children) scope(child);
        os << "$upscope $end\n";
    };
    scope(c.root());

    os << "$enddefinitions $end\n";
    os << "#0\n$dumpvars\n";
    for (std::size_t i = 0; i < tracked_.size(); ++i) {
        const auto& [sig, val] = initial_[i];
        (void)sig;
        if (val.size() == 1)
            os << val << tracked_[i].id_code << "\n";
        else
            os << "b" << val << " " << tracked_[i].id_code << "\n";
    }
    os << "$end\n";
    os << changes_.str();
    return os.str();
}

void VcdRecorder::write_file(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open VCD output file: " + path);
    f << text();
}

}  // namespace hgl
