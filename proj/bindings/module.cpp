#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hazeclear/dataset.hpp"
#include "hazeclear/dcp.hpp"
#include "hazeclear/metrics.hpp"
#include "hazeclear/regression.hpp"
#include "hazeclear/synth.hpp"

namespace py = pybind11;
using namespace hazeclear;

namespace {

// (H, W, 3) float32 interleaved <-> planar Image
Image image_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected an array of shape (H, W, 3)");
    const int h = int(arr.shape(0)), w = int(arr.shape(1));
    Image img(h, w);
    auto view = arr.unchecked<3>();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            img.set_pixel(y, x, {view(y, x, 0), view(y, x, 1), view(y, x, 2)});
    return img;
}

py::array_t<float> image_to_array(const Image& img) {
    py::array_t<float> arr({img.height(), img.width(), 3});
    auto view = arr.mutable_unchecked<3>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            Rgb p = img.pixel(y, x);
            view(y, x, 0) = p.r;
            view(y, x, 1) = p.g;
            view(y, x, 2) = p.b;
        }
    return arr;
}

ScalarMap map_from_array(const py::array_t<float, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected an array of shape (H, W)");
    ScalarMap m(int(arr.shape(0)), int(arr.shape(1)));
    auto view = arr.unchecked<2>();
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) m.at(y, x) = view(y, x);
    return m;
}

py::array_t<float> map_to_array(const ScalarMap& m) {
    py::array_t<float> arr({m.height(), m.width()});
    auto view = arr.mutable_unchecked<2>();
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) view(y, x) = m.at(y, x);
    return arr;
}

Rgb rgb_from_tuple(py::object obj) {
    auto seq = obj.cast<std::vector<float>>();
    if (seq.size() != 3) throw py::value_error("expected 3 components");
    return {seq[0], seq[1], seq[2]};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dark-channel dehazing with a trained linear correction model";

    py::register_exception<Error>(m, "HazeclearError");

    py::class_<DcpParams>(m, "DcpParams")
        .def(py::init<>())
        .def_readwrite("window_radius", &DcpParams::window_radius)
        .def_readwrite("omega", &DcpParams::omega)
        .def_readwrite("t0", &DcpParams::t0)
        .def_readwrite("airlight_fraction", &DcpParams::airlight_fraction)
        .def_property(
            "refine",
            [](const DcpParams& p) { return p.refine == Refine::guided ? "guided" : "none"; },
            [](DcpParams& p, const std::string& v) {
                if (v == "guided")
                    p.refine = Refine::guided;
                else if (v == "none")
                    p.refine = Refine::none;
                else
                    throw py::value_error("refine must be 'none' or 'guided'");
            })
        .def_readwrite("guided_radius", &DcpParams::guided_radius)
        .def_readwrite("guided_eps", &DcpParams::guided_eps);

    py::class_<RegressionModel>(m, "RegressionModel")
        .def(py::init<>())
        .def_static("identity", &RegressionModel::identity)
        .def_property(
            "w0", [](const RegressionModel& m_) { return py::make_tuple(m_.w0.r, m_.w0.g, m_.w0.b); },
            [](RegressionModel& m_, py::object v) { m_.w0 = rgb_from_tuple(v); })
        .def_property(
            "w1", [](const RegressionModel& m_) { return py::make_tuple(m_.w1.r, m_.w1.g, m_.w1.b); },
            [](RegressionModel& m_, py::object v) { m_.w1 = rgb_from_tuple(v); })
        .def_property(
            "w2", [](const RegressionModel& m_) { return py::make_tuple(m_.w2.r, m_.w2.g, m_.w2.b); },
            [](RegressionModel& m_, py::object v) { m_.w2 = rgb_from_tuple(v); })
        .def_property(
            "b", [](const RegressionModel& m_) { return py::make_tuple(m_.b.r, m_.b.g, m_.b.b); },
            [](RegressionModel& m_, py::object v) { m_.b = rgb_from_tuple(v); });

    m.def("load_image",
          [](const std::filesystem::path& p) { return image_to_array(load_image(p)); },
          py::arg("path"));
    m.def("save_image",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> arr,
             const std::filesystem::path& p) { save_image(image_from_array(arr), p); },
          py::arg("image"), py::arg("path"));

    m.def("dark_channel",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> arr, int radius) {
              return map_to_array(dark_channel(image_from_array(arr), radius));
          },
          py::arg("image"), py::arg("radius") = 7);

    m.def("dehaze_dcp",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> arr,
             const DcpParams& params) {
              auto [out, t, a] = dehaze_dcp(image_from_array(arr), params);
              return py::make_tuple(image_to_array(out), map_to_array(t),
                                    py::make_tuple(a.r, a.g, a.b));
          },
          py::arg("image"), py::arg("params") = DcpParams{},
          "Returns (recovered, transmission, airlight).");

    m.def("dehaze_mlr",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> arr,
             const RegressionModel& model, const DcpParams& params) {
              return image_to_array(dehaze_mlr(image_from_array(arr), model, params));
          },
          py::arg("image"), py::arg("model"), py::arg("params") = DcpParams{});

    m.def("apply_haze",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> clean,
             py::array_t<float, py::array::c_style | py::array::forcecast> t, py::object airlight) {
              return image_to_array(
                  apply_haze(image_from_array(clean), map_from_array(t), rgb_from_tuple(airlight)));
          },
          py::arg("clean"), py::arg("transmission"), py::arg("airlight"));

    m.def("transmission_from_depth",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> depth, double beta) {
              return map_to_array(transmission_from_depth(map_from_array(depth), beta));
          },
          py::arg("depth"), py::arg("beta"));

    m.def("psnr",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> a,
             py::array_t<float, py::array::c_style | py::array::forcecast> b, double peak) {
              return psnr(image_from_array(a), image_from_array(b), peak);
          },
          py::arg("a"), py::arg("b"), py::arg("peak") = 1.0);

    m.def("ssim",
          [](py::array_t<float, py::array::c_style | py::array::forcecast> a,
             py::array_t<float, py::array::c_style | py::array::forcecast> b) {
              return ssim(image_from_array(a), image_from_array(b));
          },
          py::arg("a"), py::arg("b"));

    m.def("load_model", &load_model, py::arg("path"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
}
