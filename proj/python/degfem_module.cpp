#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <numbers>

#include "degfem/study.hpp"
#include "degfem/verify.hpp"

namespace py = pybind11;
using namespace degfem;

namespace {

py::array_t<double> vertex_array(const Triangulation& t) {
  py::array_t<double> a({static_cast<py::ssize_t>(t.num_vertices()), py::ssize_t{2}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < t.num_vertices(); ++i) {
    m(i, 0) = t.vertices()[i].x;
    m(i, 1) = t.vertices()[i].y;
  }
  return a;
}

py::array_t<int> triangle_array(const Triangulation& t) {
  py::array_t<int> a({static_cast<py::ssize_t>(t.num_triangles()), py::ssize_t{3}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t k = 0; k < t.num_triangles(); ++k) {
    for (int j = 0; j < 3; ++j) m(k, j) = t.triangles()[k][j];
  }
  return a;
}

Triangulation from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> v,
                          py::array_t<int, py::array::c_style | py::array::forcecast> t) {
  if (v.ndim() != 2 || v.shape(1) != 2) throw std::invalid_argument("vertices must have shape (n, 2)");
  if (t.ndim() != 2 || t.shape(1) != 3) throw std::invalid_argument("triangles must have shape (m, 3)");
  std::vector<Point2> pts(static_cast<std::size_t>(v.shape(0)));
  auto vv = v.unchecked<2>();
  for (py::ssize_t i = 0; i < v.shape(0); ++i) pts[i] = {vv(i, 0), vv(i, 1)};
  std::vector<Triangle> tris(static_cast<std::size_t>(t.shape(0)));
  auto tt = t.unchecked<2>();
  for (py::ssize_t k = 0; k < t.shape(0); ++k) tris[k] = {tt(k, 0), tt(k, 1), tt(k, 2)};
  return Triangulation::build(std::move(pts), std::move(tris));
}

NodalField to_field(const Triangulation& tri, py::array_t<double, py::array::c_style | py::array::forcecast> v) {
  if (v.ndim() != 1 || static_cast<std::size_t>(v.shape(0)) != tri.num_vertices()) {
    throw std::invalid_argument("field length must equal the vertex count");
  }
  return NodalField{std::vector<double>(v.data(), v.data() + v.shape(0))};
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

py::dict band_dict(const Band& b) { return json_to_py(to_json(b)); }

}  // namespace

PYBIND11_MODULE(_degfem, m) {
  m.doc() = "P1 finite elements on meshes with degenerating triangles";

  py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
  py::register_exception<SolverBreakdown>(m, "SolverBreakdown", PyExc_RuntimeError);

  py::class_<Triangulation>(m, "Mesh")
      .def(py::init(&from_arrays), py::arg("vertices"), py::arg("triangles"))
      .def_property_readonly("vertices", &vertex_array)
      .def_property_readonly("triangles", &triangle_array)
      .def_property_readonly("num_vertices", &Triangulation::num_vertices)
      .def_property_readonly("num_triangles", &Triangulation::num_triangles)
      .def_property_readonly("mesh_size", &Triangulation::mesh_size)
      .def_property_readonly("total_area", &Triangulation::total_area)
      .def("max_angles",
           [](const Triangulation& t) {
             std::vector<double> a;
             for (const TriangleGeom& g : t.geoms()) a.push_back(g.max_angle);
             return py::array_t<double>(static_cast<py::ssize_t>(a.size()), a.data());
           })
      .def("write",
           [](const Triangulation& t, const std::string& path) {
             std::ofstream os(path);
             write_mesh(os, t);
           })
      .def_static("read", [](const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::invalid_argument("cannot read " + path);
        return read_mesh(is);
      });

  m.def("uniform", &unit_square_uniform, py::arg("n"));
  m.def(
      "babuska_aziz",
      [](int nx, int ny) {
        RowMesh rm = babuska_aziz(nx, ny);
        py::list bands;
        for (const Band& b : rm.bands) bands.append(band_dict(b));
        return py::make_tuple(std::move(rm.mesh), bands);
      },
      py::arg("nx"), py::arg("ny"));
  m.def(
      "single_band",
      [](int nx, double hbar) {
        SingleBandMesh sb = single_band_mesh(nx, hbar);
        return py::make_tuple(std::move(sb.mesh), band_dict(sb.band), sb.max_angle_outside);
      },
      py::arg("nx"), py::arg("hbar"));
  m.def(
      "subdivided_band",
      [](int nx, double hbar) {
        SubdividedBandMesh sb = subdivided_band_mesh(nx, hbar);
        return py::make_tuple(std::move(sb.mesh), sb.tilde_elements, sb.split_elements);
      },
      py::arg("nx"), py::arg("hbar"));
  m.def(
      "cluster",
      [](int n, int i, int j, int k, int rows) {
        ClusterMesh cm = cluster_mesh(n, {i, j, k}, rows);
        return py::make_tuple(std::move(cm.mesh), cm.cluster, cm.diameter);
      },
      py::arg("n"), py::arg("i"), py::arg("j"), py::arg("k"), py::arg("rows"));

  m.def(
      "classify",
      [](const Triangulation& t, double alpha0) {
        MeshClassification c = classify(t, alpha0);
        return py::make_tuple(c.t1, c.t2);
      },
      py::arg("mesh"), py::arg("alpha0") = 0.9 * std::numbers::pi);

  m.def(
      "solve",
      [](const Triangulation& t, const std::string& solution, bool iterative) {
        SolveOptions o;
        o.force_iterative = iterative;
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(assemble(t, named_solution(solution)), o);
        }
        py::dict d;
        d["values"] = py::array_t<double>(static_cast<py::ssize_t>(r.field.values.size()), r.field.values.data());
        d["relative_residual"] = r.relative_residual;
        d["method"] = r.method;
        return d;
      },
      py::arg("mesh"), py::arg("solution") = "paraboloid", py::arg("iterative") = false);
  m.def(
      "interpolate",
      [](const Triangulation& t, const std::string& solution) {
        NodalField f = lagrange(named_solution(solution), t);
        return py::array_t<double>(static_cast<py::ssize_t>(f.values.size()), f.values.data());
      },
      py::arg("mesh"), py::arg("solution") = "paraboloid");
  m.def(
      "h1_error",
      [](const Triangulation& t, py::array_t<double, py::array::c_style | py::array::forcecast> v,
         const std::string& solution) { return h1_error(named_solution(solution), to_field(t, v), t); },
      py::arg("mesh"), py::arg("values"), py::arg("solution") = "paraboloid");

  m.def("proj_p1_residual", &proj_p1_residual, py::arg("length"), py::arg("c"));
  m.def(
      "difference_bound",
      [](const std::vector<double>& h, const std::vector<double>& a) {
        DifferenceBound d = difference_bound_oracle(h, a);
        return py::make_tuple(d.lhs, d.rhs, d.holds);
      },
      py::arg("h"), py::arg("a"));
  m.def(
      "three_element_identity",
      [](std::array<double, 2> a, std::array<double, 2> b, std::array<double, 2> c, std::array<double, 3> u0,
         std::array<double, 3> u1) {
        IdentityResult r = three_element_identity_check({{a[0], a[1]}, {b[0], b[1]}, {c[0], c[1]}},
                                                        Affine{u0[0], {u0[1], u0[2]}}, Affine{u1[0], {u1[1], u1[2]}});
        py::dict d;
        d["lhs"] = static_cast<double>(r.lhs);
        d["rhs"] = static_cast<double>(r.rhs);
        d["alpha_tilde"] = r.alpha_tilde;
        d["holds"] = r.holds;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("u0"), py::arg("u1"),
      "Affine maps are given as (c, gx, gy).");
  m.def(
      "eval_phi",
      [](double r, double x, double y) {
        BumpValue b = eval_phi(r, {x, y});
        return py::make_tuple(b.value, b.grad.x, b.grad.y);
      },
      py::arg("r"), py::arg("x"), py::arg("y"));
  m.def(
      "eval_psi",
      [](double r, double x, double y) {
        BumpValue b = eval_psi(r, {x, y});
        return py::make_tuple(b.value, b.grad.x, b.grad.y);
      },
      py::arg("r"), py::arg("x"), py::arg("y"));

  m.def(
      "study_json",
      [](const std::string& family, const std::vector<int>& levels, std::optional<double> beta, double alpha) {
        StudyConfig c;
        c.family = parse_family(family);
        c.levels = levels.empty() ? default_levels(c.family) : levels;
        c.beta = beta;
        c.alpha = alpha;
        StudyResult r;
        {
          py::gil_scoped_release release;
          r = run_study(c);
        }
        return py::make_tuple(study_json(r).dump(), study_csv(r));
      },
      py::arg("family"), py::arg("levels") = std::vector<int>{}, py::arg("beta") = py::none(),
      py::arg("alpha") = 1.0);
  m.def(
      "verify_json", [](const std::string& suite, std::uint64_t seed) { return to_json(run_suite(suite, seed)).dump(); },
      py::arg("suite"), py::arg("seed") = kDefaultSeed);
}
