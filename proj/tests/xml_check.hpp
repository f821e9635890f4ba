#pragma once

#include <expat.h>

#include <string>

namespace testutil {

// True when `doc` parses as well-formed XML under expat.
inline bool well_formed_xml(const std::string& doc, std::string* error = nullptr) {
  XML_Parser p = XML_ParserCreate("UTF-8");
  const bool ok = XML_Parse(p, doc.data(), static_cast<int>(doc.size()), 1) == XML_STATUS_OK;
  if (!ok && error) {
    *error = std::string(XML_ErrorString(XML_GetErrorCode(p))) + " at line " +
             std::to_string(XML_GetCurrentLineNumber(p));
  }
  XML_ParserFree(p);
  return ok;
}

}  // namespace testutil
