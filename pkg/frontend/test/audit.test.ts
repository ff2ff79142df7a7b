// Static audit: the console must contain zero payroll arithmetic. Every
// displayed money value is a string the server formatted; nothing in src/
// may compute with, parse, or reformat money-named values.
import { readFileSync, readdirSync, statSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

const SRC_ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "src");

const MONEY_WORDS = "(?:gross|net|amount|current|rate|money|salary|wage|total)";
const FORBIDDEN = [
  { name: "toFixed anywhere", pattern: /\.toFixed\s*\(/ },
  {
    name: "numeric parsing of money fields",
    pattern: new RegExp(`\\b(?:Number|parseFloat|parseInt)\\(\\s*[^)]*\\b${MONEY_WORDS}\\b`, "i"),
  },
  {
    name: "arithmetic after a money identifier",
    pattern: new RegExp(`\\b${MONEY_WORDS}\\b\\s*[-+*/%]`, "i"),
  },
  {
    name: "arithmetic before a money identifier",
    pattern: new RegExp(`[-+*/%]\\s*(?:\\w+\\.)*\\b${MONEY_WORDS}\\b`, "i"),
  },
];

function tsFiles(dir: string): string[] {
  const out: string[] = [];
  for (const entry of readdirSync(dir)) {
    const path = join(dir, entry);
    if (statSync(path).isDirectory()) out.push(...tsFiles(path));
    else if (entry.endsWith(".ts")) out.push(path);
  }
  return out;
}

// Strings and comments are display text, not computation: strip them, but
// keep template-literal expressions, which are code.
function codeOnly(source: string): string {
  const templateExpressions: string[] = [];
  for (const match of source.matchAll(/\$\{([^}]*)\}/g)) {
    templateExpressions.push(match[1]);
  }
  let stripped = source
    .replace(/`(?:[^`\\]|\\.)*`/gs, '""')
    .replace(/'(?:[^'\\]|\\.)*'/g, '""')
    .replace(/"(?:[^"\\]|\\.)*"/g, '""')
    .replace(/\/\*[\s\S]*?\*\//g, "")
    .replace(/\/\/[^\n]*/g, "");
  return stripped + "\n" + templateExpressions.join("\n");
}

describe("money-arithmetic audit", () => {
  const files = tsFiles(SRC_ROOT);

  it("scans the real source tree", () => {
    expect(files.length).toBeGreaterThanOrEqual(8);
  });

  it.each(files.map((f) => [f.replace(SRC_ROOT, "src"), f]))(
    "%s contains no money arithmetic",
    (_label, path) => {
      const code = codeOnly(readFileSync(path as string, "utf-8"));
      for (const { name, pattern } of FORBIDDEN) {
        const match = pattern.exec(code);
        expect(
          match,
          match ? `${name}: ...${code.slice(Math.max(0, match.index - 40), match.index + 40)}...` : undefined,
        ).toBeNull();
      }
    },
  );

  it("the audit itself catches violations", () => {
    const bad = codeOnly("const pay = gross - withheldTotal;\nconst x = Number(netText);");
    expect(FORBIDDEN.some(({ pattern }) => pattern.test(bad))).toBe(true);
    const sneaky = codeOnly("el('div', {}, [`${gross * 2}`]);"); // inside a template literal
    expect(FORBIDDEN.some(({ pattern }) => pattern.test(sneaky))).toBe(true);
  });
});
