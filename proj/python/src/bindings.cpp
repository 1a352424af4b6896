#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apir/chirp.hpp"
#include "apir/errors.hpp"
#include "apir/impulse.hpp"
#include "apir/recovery.hpp"
#include "apir/signal.hpp"
#include "apir/system_sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace apir;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const RealArray& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

std::vector<Complex> to_vector(const ComplexArray& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(std::span<const double> x) {
  py::array_t<double> out(static_cast<py::ssize_t>(x.size()));
  std::copy(x.begin(), x.end(), out.mutable_data());
  return out;
}

py::array_t<Complex> to_array(std::span<const Complex> x) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(x.size()));
  std::copy(x.begin(), x.end(), out.mutable_data());
  return out;
}

RealSignal signal(const RealArray& a, double fs) { return RealSignal(to_vector(a), fs); }
Spectrum spectrum(const ComplexArray& a, double fs) { return Spectrum(to_vector(a), fs); }
PhaseCurve phase(const RealArray& a, double fs) { return PhaseCurve(to_vector(a), fs); }

SweepFamily family(const std::string& name) {
  const auto f = parse_sweep_family(name);
  if (!f) throw InvalidArgument("unknown sweep family '" + name + "' (none|linear|exp1|exp2)");
  return *f;
}

}  // namespace

PYBIND11_MODULE(_apir, m) {
  m.doc() = "Band-limited impulse excitation and allpass-chirp FIR identification";

  static py::exception<Error> error(m, "ApirError");
  static py::exception<InvalidArgument> invalid(m, "InvalidArgument", PyExc_ValueError);
  static py::exception<DivisionBlowup> blowup(m, "DivisionBlowup", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DivisionBlowup& e) {
      py::tuple args = py::make_tuple(e.what(), py::cast(e.bins()));
      PyErr_SetObject(blowup.ptr(), args.ptr());
    } catch (const InvalidArgument& e) {
      PyErr_SetString(invalid.ptr(), e.what());
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  m.def(
      "dft", [](const RealArray& x, double fs) { return to_array(dft(signal(x, fs)).bins()); },
      py::arg("x"), py::arg("fs") = 1.0, "Unnormalised forward DFT of a real signal.");
  m.def(
      "idft", [](const ComplexArray& x, double fs) { return to_array(idft(spectrum(x, fs)).samples()); },
      py::arg("x"), py::arg("fs") = 1.0, "Inverse DFT (1/N scaled) of a hermitian spectrum.");

  m.def(
      "band_limited_impulse",
      [](std::size_t n, double fs, double f_min, double f_max) {
        return to_array(band_limited_impulse(n, fs, {f_min, f_max}).bins());
      },
      py::arg("n"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"));
  m.def(
      "time_domain_impulse",
      [](std::size_t n, double fs, double f_min, double f_max) {
        return to_array(time_domain_impulse(n, fs, {f_min, f_max}).samples());
      },
      py::arg("n"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"));

  m.def(
      "linear_chirp_phase",
      [](std::size_t n, double fs, double f_min, double f_max, double duration) {
        return to_array(linear_chirp_phase(n, fs, {f_min, f_max}, duration).values());
      },
      py::arg("n"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"), py::arg("duration"));
  m.def(
      "apply_allpass",
      [](const ComplexArray& x, const RealArray& phi, double fs) {
        return to_array(apply_allpass(spectrum(x, fs), phase(phi, fs)).bins());
      },
      py::arg("x"), py::arg("phase"), py::arg("fs") = 1.0);
  m.def(
      "invert_phase",
      [](const RealArray& phi, double fs) { return to_array(invert_phase(phase(phi, fs)).values()); },
      py::arg("phase"), py::arg("fs") = 1.0);

  m.def(
      "make_reference",
      [](std::size_t n, double fs, double f_min, double f_max, const std::string& sweep, double duration,
         bool compensation) {
        const Reference ref = make_reference(n, fs, {family(sweep), duration, {f_min, f_max}, compensation});
        return py::make_tuple(to_array(ref.signal.samples()), to_array(ref.phase.values()), ref.scale);
      },
      py::arg("n"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"), py::arg("sweep") = "linear",
      py::arg("duration") = 0.06, py::arg("compensation") = true,
      "Excitation signal, its phase curve and the playback scale.");

  m.def(
      "random_fir_system",
      [](std::size_t n, double fs, std::size_t active_taps, std::uint64_t seed) {
        return to_array(random_fir_system(n, fs, active_taps, seed).taps.samples());
      },
      py::arg("n"), py::arg("fs"), py::arg("active_taps"), py::arg("seed"));
  m.def(
      "force_system",
      [](const RealArray& taps, const RealArray& r, double fs) {
        return to_array(force_system(SystemModel(signal(taps, fs), "array"), signal(r, fs)).samples());
      },
      py::arg("taps"), py::arg("r"), py::arg("fs") = 1.0);
  m.def(
      "add_noise",
      [](const RealArray& y, double snr_db, std::uint64_t seed, double fs) {
        return to_array(add_noise(signal(y, fs), snr_db, seed).samples());
      },
      py::arg("y"), py::arg("snr_db"), py::arg("seed"), py::arg("fs") = 1.0);
  m.def(
      "stacked_capture",
      [](const RealArray& y, double snr_db, std::size_t count, std::uint64_t seed, double fs) {
        return to_array(stack_captures(make_captures(signal(y, fs), snr_db, count, seed)).samples());
      },
      py::arg("y"), py::arg("snr_db"), py::arg("count"), py::arg("seed"), py::arg("fs") = 1.0,
      "Mean of `count` noisy captures of y.");

  m.def(
      "recover_impulse_model",
      [](const RealArray& y, const RealArray& phi, double fs, double f_min, double f_max,
         double reference_scale, std::optional<ComplexArray> truth, std::size_t guard_bins) {
        RecoveryOptions options{reference_scale, std::nullopt, guard_bins};
        if (truth) options.truth = spectrum(*truth, fs);
        const RecoveryResult r =
            recover_impulse_model(signal(y, fs), phase(phi, fs), {f_min, f_max}, options);
        py::dict out;
        out["model"] = to_array(r.model.samples());
        out["model_spectrum"] = to_array(r.model_spectrum.bins());
        out["in_band_error"] = r.in_band_error ? py::cast(*r.in_band_error) : py::none();
        return out;
      },
      py::arg("y"), py::arg("phase"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"),
      py::arg("reference_scale") = 1.0, py::arg("truth") = py::none(),
      py::arg("guard_bins") = kDefaultGuardBins);
  m.def(
      "naive_deconvolve",
      [](const ComplexArray& y, const ComplexArray& r, std::optional<double> floor, double fs) {
        return to_array(naive_deconvolve(spectrum(y, fs), spectrum(r, fs), floor).bins());
      },
      py::arg("y"), py::arg("r"), py::arg("floor") = py::none(), py::arg("fs") = 1.0);
  m.def(
      "in_band_error",
      [](const ComplexArray& h_ref, const ComplexArray& h_hat, double fs, double f_min, double f_max,
         std::size_t guard_bins) {
        const auto a = to_vector(h_ref);
        const auto b = to_vector(h_hat);
        return in_band_error(a, b, fs, {f_min, f_max}, guard_bins);
      },
      py::arg("h_ref"), py::arg("h_hat"), py::arg("fs"), py::arg("f_min"), py::arg("f_max"),
      py::arg("guard_bins") = kDefaultGuardBins);
}
