export * from "./protocol";
export * from "./scene";
export * from "./gestures";
export * from "./renderer";
export * from "./app";
