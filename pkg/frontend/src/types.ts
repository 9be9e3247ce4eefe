/** Shared view-layer types. */

export type { PairDetail, PairListing } from "./api.js";

export type QueueSelection = {
  metric: string;
  group: string;
  bucketLo: number;
};
