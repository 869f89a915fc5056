import { defineConfig } from "vitest/config";

// The build output is served by the planning service itself under /ui,
// so asset URLs must be relative and the bundle lands inside the Python
// package's static directory.
export default defineConfig({
  base: "./",
  build: {
    outDir: "../src/graspforge/static/ui",
    emptyOutDir: true,
  },
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
  },
});
