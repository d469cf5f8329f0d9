// loadfsk: software modem and simulation toolkit for CPU-load covert
// channels. Subcommands: transmit, receive, simulate, eval, sweep,
// monitor, jam.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 no frames decoded, 4 module error.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "loadfsk/bits.hpp"
#include "loadfsk/channel.hpp"
#include "loadfsk/countermeasures.hpp"
#include "loadfsk/evaluation.hpp"
#include "loadfsk/load_executor.hpp"
#include "loadfsk/modem.hpp"
#include "loadfsk/receiver.hpp"
#include "loadfsk/schedule.hpp"
#include "loadfsk/svg_plot.hpp"
#include "loadfsk/wav_io.hpp"

using namespace loadfsk;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kUsage = 1, kIoError = 2, kDecodeEmpty = 3, kModuleError = 4 };

// ------------------------------------------------------------------ plumbing

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void set(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void set(const std::string& key, double value) {
        char tmp[64];
        std::snprintf(tmp, sizeof tmp, "%.10g", value);
        set(key, std::string(tmp));
    }
    void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }

    void write(const std::string& path, const std::string& subcommand) const {
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write manifest: " + path);
        out << "# loadfsk " << subcommand << " run manifest; rerun with --config " << path
            << "\n";
        out << "version=" << kVersion << "\n";
        for (const auto& [k, v] : entries)
            out << k << "=" << v << "\n";
    }
};

// Config files are plain key=value lines matching the long option names;
// values from the file are injected before the user's flags, so flags win.
std::vector<std::string> config_as_args(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read config: " + path);
    std::vector<std::string> args;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            continue;
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "version")
            continue;
        args.push_back("--" + key);
        if (value != "true")
            args.push_back(value);
    }
    return args;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Waveform read_waveform(const std::string& path) {
    return ends_with(path, ".f32") ? read_raw_f32(path) : read_wav(path);
}

void write_waveform(const std::string& path, const Waveform& w) {
    if (ends_with(path, ".f32"))
        write_raw_f32(path, w);
    else
        write_wav(path, w);
}

// ------------------------------------------------------------ shared options

struct SchemeOptions {
    std::string scheme = "bfsk";  // bfsk | mfsk4 | mc4
    double rate = 100.0;
    double fs = 48000.0;
    std::string tones;  // comma-separated override
    double amplitude = 1.0;
    std::string mode = "dynamic";
    std::size_t static_size = 32;

    void attach(CLI::App* cmd) {
        cmd->add_option("--scheme", scheme, "Modulation scheme: bfsk|mfsk4|mc4")
            ->check(CLI::IsMember({"bfsk", "mfsk4", "mc4"}));
        cmd->add_option("--rate", rate, "Aggregate bit rate in bits/s (default 100)");
        cmd->add_option("--fs", fs, "Sample rate in Hz (default 48000)");
        cmd->add_option("--tones", tones, "Comma-separated tone list override in Hz");
        cmd->add_option("--amplitude", amplitude, "Carrier amplitude (default 1.0)");
        cmd->add_option("--mode", mode, "Frame mode: dynamic|static")
            ->check(CLI::IsMember({"dynamic", "static"}));
        cmd->add_option("--static-size", static_size, "Static payload bits (default 32)");
    }

    ModulationScheme::Kind kind() const {
        if (scheme == "bfsk")
            return ModulationScheme::Kind::BFSK;
        if (scheme == "mfsk4")
            return ModulationScheme::Kind::MFSK;
        return ModulationScheme::Kind::MultiCarrier;
    }

    ModulationScheme build() const {
        ModulationScheme s = scheme_for_rate(kind(), rate, fs);
        if (!tones.empty()) {
            s.tones.clear();
            std::stringstream ss(tones);
            std::string item;
            while (std::getline(ss, item, ','))
                s.tones.push_back(std::stod(item));
        }
        s.amplitude = amplitude;
        s.validate();
        return s;
    }

    FrameMode frame_mode() const {
        return mode == "static" ? FrameMode::fixed(static_size) : FrameMode::dynamic();
    }

    void record(Manifest& m) const {
        m.set("scheme", scheme);
        m.set("rate", rate);
        m.set("fs", fs);
        if (!tones.empty())
            m.set("tones", tones);
        m.set("amplitude", amplitude);
        m.set("mode", mode);
        m.set("static-size", static_cast<std::uint64_t>(static_size));
    }
};

std::string locate_profile(const std::string& name, const std::string& profile_dir) {
    if (std::ifstream(name).good())
        return name;
    std::vector<std::string> dirs;
    if (!profile_dir.empty())
        dirs.push_back(profile_dir);
    if (const char* env = std::getenv("LOADFSK_PROFILE_DIR"))
        dirs.push_back(env);
#ifdef LOADFSK_INSTALL_PROFILE_DIR
    dirs.push_back(LOADFSK_INSTALL_PROFILE_DIR);
#endif
    dirs.push_back("data/profiles");
    for (const auto& dir : dirs) {
        const std::string candidate = dir + "/" + name + ".profile";
        if (std::ifstream(candidate).good())
            return candidate;
    }
    throw std::runtime_error("cannot locate channel profile: " + name);
}

std::vector<Bits> chunk_payloads(const Bits& all, const FrameMode& mode,
                                 std::size_t chunk_bits) {
    std::vector<Bits> payloads;
    if (mode.kind == FrameMode::Kind::Static) {
        for (std::size_t i = 0; i < all.size(); i += mode.static_size) {
            Bits p(all.begin() + static_cast<std::ptrdiff_t>(i),
                   all.begin() + static_cast<std::ptrdiff_t>(
                                     std::min(all.size(), i + mode.static_size)));
            p.resize(mode.static_size, 0);  // zero-pad the tail frame
            payloads.push_back(std::move(p));
        }
        if (payloads.empty())
            payloads.emplace_back(mode.static_size, 0);
    } else {
        const std::size_t chunk = std::min(chunk_bits, kMaxDynamicPayloadBits);
        for (std::size_t i = 0; i < all.size(); i += chunk)
            payloads.emplace_back(
                all.begin() + static_cast<std::ptrdiff_t>(i),
                all.begin() + static_cast<std::ptrdiff_t>(std::min(all.size(), i + chunk)));
        if (payloads.empty())
            payloads.emplace_back();
    }
    return payloads;
}

// // ------------------------------------------------------------- subcommands

int cmd_transmit(const SchemeOptions& opts, const std::string& in_path,
                 const std::string& out_path, bool bits_file, bool live_load, int cores,
                 double timer_res_us, double gap_ms, std::size_t frame_bits,
                 const std::string& waveform_kind, const std::string& report_path) {
    const Bits data = bits_file ? read_bits_file(in_path) : bytes_to_bits(read_file_bytes(in_path));
    const FrameMode mode = opts.frame_mode();
    const ModulationScheme scheme = opts.build();
    const auto payloads = chunk_payloads(data, mode, frame_bits);
    const auto gap = static_cast<std::size_t>(std::llround(gap_ms / 1000.0 * scheme.sample_rate));
    const WaveKind kind = waveform_kind == "square" ? WaveKind::Square : WaveKind::Sine;

    Manifest manifest;
    opts.record(manifest);
    manifest.set("in", in_path);
    manifest.set("gap-ms", gap_ms);
    manifest.set("frame-bits", static_cast<std::uint64_t>(frame_bits));
    manifest.set("waveform", waveform_kind);

    if (live_load) {
        if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
            throw std::invalid_argument("live load execution drives single-carrier schemes");
        Bits all_frame_bits;
        for (const auto& p : payloads) {
            const Bits f = encode_frame(p, mode);
            all_frame_bits.insert(all_frame_bits.end(), f.begin(), f.end());
        }
        const LoadSchedule sched = build_schedule(all_frame_bits, scheme, cores);
        std::fprintf(stderr, "executing load schedule: %zu segments, %.3f s on %d core(s)\n",
                     sched.segments.size(), sched.total_duration_s(), cores);
        const TimingReport report = execute_schedule(sched, timer_res_us * 1e-6);
        const std::string rp = report_path.empty() ? "load_timing.txt" : report_path;
        report.save(rp);
        std::fprintf(stderr, "timing report: %s (median half-cycle error %.2f%%)\n", rp.c_str(),
                     report.median_half_cycle_error() * 100.0);
        manifest.set("live-load", "true");
        manifest.set("cores", static_cast<std::uint64_t>(cores));
        manifest.write(rp + ".manifest", "transmit");
        return kOk;
    }

    Waveform w;
    w.sample_rate = scheme.sample_rate;
    w.append(modulate_payloads(payloads, mode, scheme, kind, gap));
    write_waveform(out_path, w);
    std::fprintf(stderr, "wrote %s: %zu frames, %.3f s at %.0f Hz\n", out_path.c_str(),
                 payloads.size(), w.duration_s(), w.sample_rate);
    manifest.set("out", out_path);
    manifest.write(out_path + ".manifest", "transmit");
    return kOk;
}

int cmd_receive(const SchemeOptions& opts, const std::string& in_path,
                const std::string& out_path, bool bits_file) {
    const Waveform w = read_waveform(in_path);
    const FrameMode mode = opts.frame_mode();
    ModulationScheme scheme = opts.build();
    scheme.sample_rate = w.sample_rate;

    std::vector<DemodFrame> frames;
    if (scheme.kind == ModulationScheme::Kind::MultiCarrier)
        frames = demodulate_multicarrier(w, scheme, mode);
    else
        frames = demodulate_stream(w, ReceiverConfig::for_scheme(scheme, mode));

    std::ofstream log(out_path + ".log");
    Bits all;
    std::size_t ok_frames = 0;
    for (const auto& f : frames) {
        const char* status = f.status == FrameStatus::Ok          ? "ok"
                             : f.status == FrameStatus::CrcMismatch ? "crcfail"
                                                                    : "truncated";
        char line[128];
        std::snprintf(line, sizeof line, "FRAME %s offset=%zu bits=%zu", status,
                      f.preamble_offset, f.payload.size());
        std::puts(line);
        if (log)
            log << line << "\n";
        if (f.status == FrameStatus::Ok) {
            ++ok_frames;
            all.insert(all.end(), f.payload.begin(), f.payload.end());
        }
    }
    if (ok_frames == 0) {
        std::fprintf(stderr, "no frames decoded\n");
        return kDecodeEmpty;
    }
    if (bits_file)
        write_bits_file(out_path, all);
    else
        write_file_bytes(out_path, bits_to_bytes(all));
    std::fprintf(stderr, "decoded %zu/%zu frames (%zu bits) -> %s\n", ok_frames, frames.size(),
                 all.size(), out_path.c_str());

    Manifest manifest;
    opts.record(manifest);
    manifest.set("in", in_path);
    manifest.set("out", out_path);
    manifest.write(out_path + ".manifest", "receive");
    return kOk;
}

int cmd_simulate(const SchemeOptions& opts, const std::string& profile_name,
                 const std::string& profile_dir, double distance, bool wall,
                 std::optional<double> snr_override, const std::string& rates_csv,
                 std::size_t bits, std::uint64_t seed, const std::string& out_path) {
    double snr = 0.0;
    std::string source;
    if (snr_override) {
        snr = *snr_override;
        source = "explicit";
    } else {
        ChannelProfile profile = load_profile(locate_profile(profile_name, profile_dir));
        profile.wall = wall;
        snr = snr_at_distance(profile, distance);
        source = profile.name;
    }

    std::vector<double> rates;
    std::stringstream ss(rates_csv);
    std::string item;
    while (std::getline(ss, item, ','))
        rates.push_back(std::stod(item));

    std::fprintf(stderr, "simulating at %.2f dB SNR (%s, %.2f m%s)\n", snr, source.c_str(),
                 distance, wall ? ", behind wall" : "");
    const auto table = run_rate_table(snr, opts.kind(), rates, bits, seed);
    write_rate_csv(out_path, table);
    for (const auto& p : table)
        std::printf("rate %6.0f bps: BER %.6f (%zu/%zu bits)\n", p.rate_bps, p.ber,
                    p.bit_errors, p.bits);

    Manifest manifest;
    opts.record(manifest);
    if (!snr_override)
        manifest.set("profile", profile_name);
    else
        manifest.set("snr", snr);
    manifest.set("distance", distance);
    if (wall)
        manifest.set("wall", "true");
    manifest.set("rates", rates_csv);
    manifest.set("bits", static_cast<std::uint64_t>(bits));
    manifest.set("seed", seed);
    manifest.set("out", out_path);
    manifest.write(out_path + ".manifest", "simulate");
    return kOk;
}

int cmd_eval(const SchemeOptions& opts, const std::string& grid_spec, std::size_t bits,
             std::uint64_t seed, const std::string& variant_name, const std::string& out_path,
             const std::string& svg_path) {
    double lo = 0.0, hi = 12.0, step = 4.0;
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
        throw std::invalid_argument("--ebn0 expects start:end:step");
    std::vector<double> grid;
    for (double v = lo; v <= hi + 1e-9; v += step)
        grid.push_back(v);

    const BerVariant variant =
        variant_name == "paper" ? BerVariant::Paper : BerVariant::Standard;
    const BerReport report = run_ber_grid(opts.build(), grid, bits, seed, variant);
    write_ber_csv(out_path, report);
    for (const auto& p : report.points)
        std::printf("Eb/N0 %5.1f dB: theory %.3e measured %.3e (%zu bits)\n", p.ebn0_db,
                    p.theory_pb, p.measured_pb, p.n_bits);

    if (!svg_path.empty()) {
        CurveSeries theory{"theory (" + variant_name + ")", {}};
        CurveSeries measured{"measured", {}};
        for (const auto& p : report.points) {
            theory.points.emplace_back(p.ebn0_db, p.theory_pb);
            measured.points.emplace_back(p.ebn0_db, p.measured_pb);
        }
        CurveOptions copts;
        copts.title = "Non-coherent " + report.scheme + " BER over AWGN";
        copts.x_label = "Eb/N0 (dB)";
        copts.y_label = "bit error probability";
        copts.log_y = true;
        write_curve_svg(svg_path, {theory, measured}, copts);
    }

    Manifest manifest;
    opts.record(manifest);
    manifest.set("ebn0", grid_spec);
    manifest.set("bits", static_cast<std::uint64_t>(bits));
    manifest.set("seed", seed);
    manifest.set("variant", variant_name);
    manifest.set("out", out_path);
    if (!svg_path.empty())
        manifest.set("svg", svg_path);
    manifest.write(out_path + ".manifest", "eval");
    return kOk;
}

int cmd_sweep(double start, double end, double step, double step_duration, double fs,
              const std::string& out_path, const std::string& svg_path) {
    SweepSpec spec;
    spec.f_start_hz = start;
    spec.f_end_hz = end;
    spec.step_hz = step;
    spec.step_duration_s = step_duration;
    const Waveform w = sweep_generate(spec, fs);
    if (!out_path.empty())
        write_waveform(out_path, w);
    std::fprintf(stderr, "sweep: %zu steps, %.1f s at %.0f Hz\n", spec.n_steps(),
                 w.duration_s(), fs);
    if (!svg_path.empty()) {
        const auto sg = spectrogram(w.samples, fs, 4096, 8192);
        write_spectrogram_svg(svg_path, sg, "sweep spectrogram");
    }
    Manifest manifest;
    manifest.set("start", start);
    manifest.set("end", end);
    manifest.set("step", step);
    manifest.set("step-duration", step_duration);
    manifest.set("fs", fs);
    if (!out_path.empty())
        manifest.set("out", out_path);
    if (!svg_path.empty())
        manifest.set("svg", svg_path);
    manifest.write((out_path.empty() ? svg_path : out_path) + ".manifest", "sweep");
    return kOk;
}

int cmd_monitor(const std::string& in_path, const std::string& band_spec, double threshold,
                const std::string& out_path) {
    double lo = 2000.0, hi = 24000.0;
    if (std::sscanf(band_spec.c_str(), "%lf:%lf", &lo, &hi) != 2)
        throw std::invalid_argument("--band expects lo:hi in Hz");
    const Waveform w = read_waveform(in_path);
    MonitorConfig cfg;
    cfg.alert_threshold = threshold;
    const auto alerts = monitor(w, lo, hi, cfg);

    std::ofstream out;
    if (!out_path.empty())
        out.open(out_path);
    for (const auto& a : alerts) {
        const std::string line = alert_log_line(a);
        std::puts(line.c_str());
        if (out)
            out << line << "\n";
    }
    std::fprintf(stderr, "%zu alert(s) over %.1f s\n", alerts.size(), w.duration_s());
    return kOk;
}

int cmd_jam(int threads, double duration, std::uint64_t seed, const std::string& report_path,
            const std::string& in_path, const std::string& out_path, int jammers,
            const std::string& band_spec) {
    if (!in_path.empty()) {
        // File mode: add simulated jamming interference to a waveform.
        double lo = 2000.0, hi = 24000.0;
        if (std::sscanf(band_spec.c_str(), "%lf:%lf", &lo, &hi) != 2)
            throw std::invalid_argument("--band expects lo:hi in Hz");
        const Waveform w = read_waveform(in_path);
        write_waveform(out_path, apply_jamming(w, jammers, lo, hi, seed));
        std::fprintf(stderr, "added %d jammer(s) in [%.0f, %.0f] Hz -> %s\n", jammers, lo, hi,
                     out_path.c_str());
        return kOk;
    }
    const TimingReport report = spawn_jammer(threads, duration, seed);
    report.save(report_path);
    std::fprintf(stderr, "jammer ran %.2f s on %d thread(s); report: %s\n", report.wall_s,
                 threads, report_path.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"software modem and simulation toolkit for CPU-load covert channels"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path,
                   "key=value config file; flags override file values");

    // transmit
    auto* tx = app.add_subcommand("transmit", "frame and modulate data to a waveform or load run");
    SchemeOptions tx_opts;
    tx_opts.attach(tx);
    std::string tx_in, tx_out = "tx.wav", tx_report, tx_waveform = "sine";
    bool tx_bits_file = false, tx_live = false;
    int tx_cores = 1;
    double tx_timer_res = 100.0, tx_gap_ms = 0.0;
    std::size_t tx_frame_bits = 4096;
    tx->add_option("--in", tx_in, "input data file (raw bytes)")->required();
    tx->add_option("--out", tx_out, "output waveform (.wav or .f32)");
    tx->add_flag("--bits-file", tx_bits_file, "treat input as a bits=<n> bit file");
    tx->add_flag("--live-load", tx_live, "execute as a CPU load schedule instead of a file");
    tx->add_option("--cores", tx_cores, "worker cores for --live-load (default 1)");
    tx->add_option("--timer-res-us", tx_timer_res, "governor timer resolution in us");
    tx->add_option("--gap-ms", tx_gap_ms, "inter-frame gap in milliseconds (default 0)");
    tx->add_option("--frame-bits", tx_frame_bits, "dynamic payload bits per frame (default 4096)");
    tx->add_option("--waveform", tx_waveform, "carrier shape: sine|square")
        ->check(CLI::IsMember({"sine", "square"}));
    tx->add_option("--report", tx_report, "timing report path for --live-load");

    // receive
    auto* rx = app.add_subcommand("receive", "demodulate a waveform back to data");
    SchemeOptions rx_opts;
    rx_opts.attach(rx);
    std::string rx_in, rx_out = "rx.bin";
    bool rx_bits_file = false;
    rx->add_option("--in", rx_in, "input waveform (.wav or .f32)")->required();
    rx->add_option("--out", rx_out, "output data file");
    rx->add_flag("--bits-file", rx_bits_file, "write a bits=<n> bit file instead of bytes");

    // simulate
    auto* sim = app.add_subcommand("simulate", "end-to-end BER over a measured channel profile");
    SchemeOptions sim_opts;
    sim_opts.attach(sim);
    std::string sim_profile = "pc2", sim_profile_dir, sim_rates = "100,500", sim_out = "simulate.csv";
    double sim_distance = 0.0;
    bool sim_wall = false;
    double sim_snr = -1e9;
    std::size_t sim_bits = 10000;
    std::uint64_t sim_seed = 1;
    sim->add_option("--profile", sim_profile, "profile name or path (default pc2)");
    sim->add_option("--profile-dir", sim_profile_dir, "extra directory to search for profiles");
    sim->add_option("--distance", sim_distance, "receiver distance in meters");
    sim->add_flag("--wall", sim_wall, "apply the behind-wall attenuation offset");
    sim->add_option("--snr", sim_snr, "override the profile with an explicit SNR in dB");
    sim->add_option("--rates", sim_rates, "comma-separated bit rates to test");
    sim->add_option("--bits", sim_bits, "payload bits per rate (default 10000)");
    sim->add_option("--seed", sim_seed, "noise seed");
    sim->add_option("--out", sim_out, "output CSV path");

    // eval
    auto* ev = app.add_subcommand("eval", "Monte-Carlo BER against the theory curve");
    SchemeOptions ev_opts;
    ev_opts.attach(ev);
    std::string ev_grid = "0:12:4", ev_variant = "standard", ev_out = "ber.csv", ev_svg;
    std::size_t ev_bits = 100000;
    std::uint64_t ev_seed = 1;
    ev->add_option("--ebn0", ev_grid, "Eb/N0 grid start:end:step in dB (default 0:12:4)");
    ev->add_option("--bits", ev_bits, "bits per grid point (default 100000)");
    ev->add_option("--seed", ev_seed, "simulation seed");
    ev->add_option("--variant", ev_variant, "theory prefactor variant: standard|paper")
        ->check(CLI::IsMember({"standard", "paper"}));
    ev->add_option("--out", ev_out, "output CSV path");
    ev->add_option("--svg", ev_svg, "optional BER curve SVG path");

    // sweep
    auto* sw = app.add_subcommand("sweep", "staircase chirp generator");
    double sw_start = 2000.0, sw_end = 63000.0, sw_step = 100.0, sw_dur = 0.1, sw_fs = 192000.0;
    std::string sw_out = "sweep.wav", sw_svg;
    sw->add_option("--start", sw_start, "start frequency in Hz (default 2000)");
    sw->add_option("--end", sw_end, "end frequency in Hz (default 63000)");
    sw->add_option("--step", sw_step, "step in Hz (default 100)");
    sw->add_option("--step-duration", sw_dur, "seconds per step (default 0.1)");
    sw->add_option("--fs", sw_fs, "sample rate in Hz (default 192000)");
    sw->add_option("--out", sw_out, "output waveform path");
    sw->add_option("--svg", sw_svg, "optional spectrogram SVG path");

    // monitor
    auto* mon = app.add_subcommand("monitor", "flag FSK-like structured emissions in a recording");
    std::string mon_in, mon_band = "2000:24000", mon_out;
    double mon_threshold = 0.5;
    mon->add_option("--in", mon_in, "input waveform")->required();
    mon->add_option("--band", mon_band, "band lo:hi in Hz (default 2000:24000)");
    mon->add_option("--threshold", mon_threshold, "alert confidence threshold (default 0.5)");
    mon->add_option("--out", mon_out, "optional alert log path");

    // jam
    auto* jam = app.add_subcommand("jam", "run jamming workloads (or add jamming to a file)");
    int jam_threads = 16, jam_count = 16;
    double jam_duration = 1.0;
    std::uint64_t jam_seed = 0x6A616D;
    std::string jam_report = "jam_timing.txt", jam_in, jam_out = "jammed.wav",
                jam_band = "2000:24000";
    jam->add_option("--threads", jam_threads, "live jammer thread count (default 16)");
    jam->add_option("--duration", jam_duration, "live run seconds (default 1.0)");
    jam->add_option("--seed", jam_seed, "randomization seed");
    jam->add_option("--report", jam_report, "timing report path");
    jam->add_option("--in", jam_in, "file mode: input waveform");
    jam->add_option("--out", jam_out, "file mode: output waveform");
    jam->add_option("--jammers", jam_count, "file mode: simulated jammer count");
    jam->add_option("--band", jam_band, "file mode: jamming band lo:hi in Hz");

    for (auto* sub : {tx, rx, sim, ev, sw, mon, jam})
        sub->fallthrough();  // app-level --config works after the subcommand

    // Two-pass parse so --config values sit between defaults and flags.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                const auto injected = config_as_args(args[i + 1]);
                // subcommand name stays first; config args follow it
                if (!args.empty() && !injected.empty())
                    args.insert(args.begin() + 1, injected.begin(), injected.end());
                break;
            }
        }
        std::vector<const char*> argv2;
        argv2.push_back(argv[0]);
        for (const auto& a : args)
            argv2.push_back(a.c_str());
        app.parse(static_cast<int>(argv2.size()), argv2.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }

    try {
        if (tx->parsed())
            return cmd_transmit(tx_opts, tx_in, tx_out, tx_bits_file, tx_live, tx_cores,
                                tx_timer_res, tx_gap_ms, tx_frame_bits, tx_waveform, tx_report);
        if (rx->parsed())
            return cmd_receive(rx_opts, rx_in, rx_out, rx_bits_file);
        if (sim->parsed())
            return cmd_simulate(sim_opts, sim_profile, sim_profile_dir, sim_distance, sim_wall,
                                sim_snr > -1e8 ? std::optional<double>(sim_snr) : std::nullopt,
                                sim_rates, sim_bits, sim_seed, sim_out);
        if (ev->parsed())
            return cmd_eval(ev_opts, ev_grid, ev_bits, ev_seed, ev_variant, ev_out, ev_svg);
        if (sw->parsed())
            return cmd_sweep(sw_start, sw_end, sw_step, sw_dur, sw_fs, sw_out, sw_svg);
        if (mon->parsed())
            return cmd_monitor(mon_in, mon_band, mon_threshold, mon_out);
        if (jam->parsed())
            return cmd_jam(jam_threads, jam_duration, jam_seed, jam_report, jam_in, jam_out,
                           jam_count, jam_band);
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIoError;
    } catch (const std::runtime_error& e) {
        // File-system failures surface as runtime errors with a path.
        const std::string msg = e.what();
        std::fprintf(stderr, "error: %s\n", msg.c_str());
        if (msg.find("cannot open") != std::string::npos ||
            msg.find("cannot read") != std::string::npos ||
            msg.find("cannot write") != std::string::npos ||
            msg.find("cannot locate") != std::string::npos ||
            msg.find("truncated") != std::string::npos ||
            msg.find("missing") != std::string::npos ||
            msg.find("malformed") != std::string::npos ||
            msg.find("not a RIFF") != std::string::npos ||
            msg.find("supported") != std::string::npos)
            return kIoError;
        return kModuleError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kModuleError;
    }
    return kUsage;
}
