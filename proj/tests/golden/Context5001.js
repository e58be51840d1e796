Context5001 = new cop.Context({ name: "Context5001"})
BAContext5001 = Trait({
  option: function(){
    this.steerLeft();
    this.speedUp();
    this.steerRight();
  }
})
Context5001.adapt(agent, BAContext5001)
