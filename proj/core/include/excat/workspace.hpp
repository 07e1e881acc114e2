#pragma once

// Text workspace format: named fields, algebras, modules, morphisms,
// complexes, morphism sets, universes and filtrations in one document.
// Every entity is validated at load; failures carry line positions.

#include "excat/chaincx.hpp"

#include <map>
#include <string>
#include <vector>

namespace excat {

struct LoadError : Error {
  std::vector<std::string> messages;  // one per failure, with line positions
  explicit LoadError(std::vector<std::string> msgs)
      : Error(msgs.empty() ? "load failed" : msgs.front()), messages(std::move(msgs)) {}
};

struct Workspace {
  std::uint32_t field_p = 0;
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, Module> modules;
  std::map<std::string, ModuleMorphism> morphisms;
  std::map<std::string, Complex> complexes;
  std::map<std::string, std::vector<std::string>> sets;         // morphism names
  std::map<std::string, std::vector<std::string>> universes;    // module names
  std::map<std::string, std::vector<std::string>> cuniverses;   // complex names
  std::map<std::string, std::vector<std::string>> filtrations;  // inflation names

  const Module& module_ref(const std::string& name) const;
  const ModuleMorphism& morphism_ref(const std::string& name) const;
  const Complex& complex_ref(const std::string& name) const;
};

Workspace load_workspace(const std::string& path);
Workspace parse_workspace(const std::string& text);

}  // namespace excat
